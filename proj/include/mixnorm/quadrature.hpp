#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "mixnorm/errors.hpp"

namespace mixnorm {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  Eigen::VectorXd x;
  Eigen::VectorXd w;
};

const GaussRule& gauss_legendre(int n);

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 4000;
  bool throw_on_failure = true;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7/15 pair.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod over an initial partition (sorted breakpoints).
// The partition lets callers grade panels toward an endpoint singularity.
template <class F>
QuadResult integrate_partition(F&& f, const std::vector<double>& breaks,
                               const QuadOptions& opt = {}) {
  std::priority_queue<detail::Panel> heap;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    auto p = detail::gk15(f, breaks[i], breaks[i + 1]);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int count = static_cast<int>(heap.size());
  auto done = [&] {
    return err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  };
  while (!done() && count < opt.max_intervals && !heap.empty()) {
    auto p = heap.top();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) break;
    heap.pop();
    auto l = detail::gk15(f, p.a, mid);
    auto r = detail::gk15(f, mid, p.b);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // re-sum to shed accumulated cancellation in the running totals
  double v = 0.0, e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  QuadResult res{v, e, count, e <= std::max(opt.abs_tol, opt.rel_tol * std::abs(v)) * 1.0001};
  if (!res.converged && opt.throw_on_failure)
    throw NumericError("adaptive quadrature did not reach tolerance", e);
  return res;
}

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  return integrate_partition(f, {a, b}, opt);
}

// Breakpoints lo = b_0 < ... < b_m = hi, geometric toward lo.
// When lo == 0 the grading stops at hi * 2^-depth.
std::vector<double> octave_breaks(double lo, double hi, int depth = 60,
                                  double ratio = 2.0);

// Breakpoints graded geometrically toward both ends of [a, b].
std::vector<double> two_sided_breaks(double a, double b, int depth = 40);

}  // namespace mixnorm
