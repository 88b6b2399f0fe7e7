#include "mixnorm/operators.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

#include "mixnorm/errors.hpp"
#include "mixnorm/quadrature.hpp"

namespace mixnorm {

namespace {

Eigen::FFT<double>& fft() {
  thread_local Eigen::FFT<double> f = [] {
    Eigen::FFT<double> e;
    e.SetFlag(Eigen::FFT<double>::Unscaled);
    return e;
  }();
  return f;
}

// angular Fourier coefficients (1/N) sum_m v_m e^{-i n theta_m}
Eigen::VectorXcd angular_coeffs(const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out;
  fft().fwd(out, v);
  return out / static_cast<double>(v.size());
}

double falling(int j, int N) {
  double p = 1.0;
  for (int i = 0; i < N; ++i) p *= j - i;
  return p;
}

double factorial(int N) { return falling(N, N); }

void check_kernel(const RadialWeight& w, const KernelTruncation& ker) {
  if (ker.weight.model_ptr() != w.model_ptr() && ker.weight.spec() != w.spec())
    throw DomainError("kernel truncation belongs to a different weight");
}

}  // namespace

// ---- kernels ----

cdouble KernelTruncation::operator()(cdouble u) const {
  cdouble s = 0.0;
  for (int n = degree; n >= 0; --n) s = s * u + coeffs[n];
  return s;
}

KernelTruncation kernel_truncate(const RadialWeight& w, int D) {
  if (D < 0) throw DomainError("truncation degree must be nonnegative");
  Eigen::VectorXd xs(D + 1);
  for (int n = 0; n <= D; ++n) xs[n] = 2.0 * n + 1.0;
  KernelTruncation k;
  k.weight = w;
  k.degree = D;
  k.coeffs = 0.5 * w.moments(xs).cwiseInverse();
  return k;
}

double kernel_tail_bound(const KernelTruncation& ker, int D, double s, int N) {
  if (D < 0 || D > ker.degree) throw DomainError("degree outside the truncation");
  return ker.coeffs[D] * std::pow(static_cast<double>(D), N) * std::pow(s, D) / (1.0 - s);
}

int required_kernel_degree(const RadialWeight& w, double s, int N, double tol) {
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("need 0 <= r|a| < 1");
  const double scale = factorial(N) * 0.5 / w.moment(2.0 * N + 1.0);
  for (int D = 16; D <= (1 << 24); D *= 2) {
    const double cD = 0.5 / w.moment(2.0 * D + 1.0);
    if (cD * std::pow(static_cast<double>(D), N) * std::pow(s, D) / (1.0 - s) < tol * scale)
      return D;
  }
  throw UnconvergedTruncation("kernel degree beyond 2^24 required", 1L << 25);
}

double kernel_derivative_mean(const KernelTruncation& ker, cdouble a, double r, int N, int degree,
                              double tol) {
  if (N < 0) throw DomainError("derivative order must be nonnegative");
  if (!(r > 0.0 && r < 1.0) || !(std::abs(a) < 1.0)) throw DomainError("need r in (0,1), |a| < 1");
  const int D = degree < 0 ? ker.degree : std::min(degree, ker.degree);
  const double s = r * std::abs(a);
  if (D < N) {
    if (s == 0.0) return 0.0;
    throw UnconvergedTruncation("truncation below the derivative order",
                                required_kernel_degree(ker.weight, s, N, tol));
  }
  const double scale = factorial(N) * ker.coeffs[N];
  if (s > 0.0 && kernel_tail_bound(ker, D, s, N) >= tol * scale)
    throw UnconvergedTruncation("kernel truncation too short for this r|a|",
                                required_kernel_degree(ker.weight, s, N, tol));

  // the trapezoid rule on the circle only needs to resolve the peak of width 1 - s
  const int nfft = std::min(circle_sample_count(D - N),
                            next_pow2(std::max(256L, static_cast<long>(128.0 / (1.0 - s)))));
  Eigen::VectorXcd bins = Eigen::VectorXcd::Zero(nfft);
  const cdouble ab = std::conj(a);
  cdouble apow = std::pow(ab, N);
  double rpow = 1.0;
  for (int j = N; j <= D; ++j) {
    bins[(j - N) % nfft] += falling(j, N) * ker.coeffs[j] * apow * rpow;
    apow *= ab;
    rpow *= r;
  }
  Eigen::VectorXcd vals;
  fft().inv(vals, bins);
  return vals.cwiseAbs().mean();
}

double kernel_mean_rhs(const RadialWeight& w, cdouble a, double r, int N) {
  const double s = r * std::abs(a);
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("need r|a| < 1");
  if (s == 0.0) return 1.0;
  return 1.0 + tail_power_integral(w, N + 1.0, 1.0, 1.0 - s);
}

// ---- coefficient operators ----

AnalyticPoly I_op(const RadialWeight& w, const AnalyticPoly& g) {
  Eigen::VectorXd xs(g.degree() + 1);
  for (int n = 0; n <= g.degree(); ++n) xs[n] = 2.0 * n + 1.0;
  const Eigen::VectorXd m = w.moments(xs);
  return AnalyticPoly(g.coeffs().cwiseProduct(m.cast<cdouble>()));
}

AnalyticPoly D_op(const RadialWeight& w, const AnalyticPoly& g) {
  Eigen::VectorXd xs(g.degree() + 1);
  for (int n = 0; n <= g.degree(); ++n) xs[n] = 2.0 * n + 1.0;
  const Eigen::VectorXd c = 0.5 * w.moments(xs).cwiseInverse();
  return AnalyticPoly(g.coeffs().cwiseProduct(c.cast<cdouble>()));
}

// ---- projections ----

AnalyticPoly bergman_project_coeffs(const RadialWeight& w, const AnalyticPoly& f,
                                    const KernelTruncation& ker) {
  check_kernel(w, ker);
  if (ker.degree < f.degree()) throw PreconditionError("truncation degree below polynomial degree");
  const int Nc = circle_sample_count(f.degree());
  const int top = std::min(ker.degree, Nc / 2 - 1);
  const RadialRule& R = w.rule();
  const RuleLevel& L = R.fine;
  const int last = R.last_piece(1e-17 / (f.degree() + 1.0));
  const int end = L.piece_end[last];

  // S(n) = integral of r^{n+1} F(r, n) omega(r) dr with F the n-th angular coefficient
  Eigen::VectorXcd S = Eigen::VectorXcd::Zero(top + 1);
  for (int i = 0; i <= end; ++i) {
    const bool lump = i == end;
    const double r = lump ? 1.0 : L.r[i];
    const double wt = lump ? R.tail_lo[last] : L.w[i];
    const Eigen::VectorXcd F = angular_coeffs(circle_values(f, r, Nc));
    double rp = r;
    for (int n = 0; n <= top; ++n, rp *= r) S[n] += wt * rp * F[n];
  }
  Eigen::VectorXcd c(top + 1);
  for (int n = 0; n <= top; ++n) c[n] = 2.0 * ker.coeffs[n] * S[n];
  return AnalyticPoly(std::move(c));
}

AnalyticPoly bergman_project_coeffs(const RadialWeight& w, const PolarSamples& f,
                                    const KernelTruncation& ker) {
  check_kernel(w, ker);
  const int M = f.angle_count();
  if (M <= 2 * ker.degree)
    throw PreconditionError("angular grid too coarse for the truncation degree");
  const int D = ker.degree;
  Eigen::VectorXcd S = Eigen::VectorXcd::Zero(D + 1);
  for (Eigen::Index i = 0; i < f.radii.size(); ++i) {
    const Eigen::VectorXcd F = angular_coeffs(f.values.row(i).transpose());
    const double a = f.edges[i], b = f.edges[i + 1];
    for (int n = 0; n <= D; ++n) {
      if (F[n] == 0.0) continue;
      S[n] += F[n] * partial_moment(w, n + 1.0, a, b);
    }
  }
  Eigen::VectorXcd c(D + 1);
  for (int n = 0; n <= D; ++n) c[n] = 2.0 * ker.coeffs[n] * S[n];
  return AnalyticPoly(std::move(c));
}

std::vector<cdouble> bergman_project(const RadialWeight& w, const AnalyticPoly& f,
                                     const KernelTruncation& ker,
                                     const std::vector<cdouble>& eval_points) {
  const AnalyticPoly p = bergman_project_coeffs(w, f, ker);
  std::vector<cdouble> out;
  for (cdouble z : eval_points) out.push_back(p(z));
  return out;
}

std::vector<cdouble> bergman_project(const RadialWeight& w, const PolarSamples& f,
                                     const KernelTruncation& ker,
                                     const std::vector<cdouble>& eval_points) {
  const AnalyticPoly p = bergman_project_coeffs(w, f, ker);
  std::vector<cdouble> out;
  for (cdouble z : eval_points) out.push_back(p(z));
  return out;
}

std::vector<cdouble> maximal_project(const RadialWeight& w, const PolarSamples& f,
                                     const KernelTruncation& ker,
                                     const std::vector<cdouble>& eval_points) {
  check_kernel(w, ker);
  const int M = f.angle_count();
  const Eigen::Index nr = f.radii.size();
  Eigen::VectorXd mass(nr);
  for (Eigen::Index i = 0; i < nr; ++i) mass[i] = weight_mass(w, f.edges[i], f.edges[i + 1], true);
  std::vector<cdouble> out;
  for (cdouble z : eval_points) {
    cdouble s = 0.0;
    for (Eigen::Index i = 0; i < nr; ++i) {
      cdouble row = 0.0;
      for (int m = 0; m < M; ++m) {
        const cdouble v = f.values(i, m);
        if (v == 0.0) continue;
        const cdouble zeta = std::polar(f.radii[i], f.theta(m));
        row += v * std::abs(ker(std::conj(z) * zeta));
      }
      s += row * mass[i];
    }
    out.push_back(s * (2.0 / M));
  }
  return out;
}

std::vector<cdouble> default_eval_points(int j_max) {
  std::vector<cdouble> z;
  for (int j = 0; j <= j_max; ++j) z.emplace_back(1.0 - std::exp2(-j / 2.0), 0.0);
  return z;
}

// ---- probes ----

double J_omega(const RadialWeight& w, double t) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("J needs t in [0, 1)");
  if (t == 0.0) return 0.0;
  return tail_power_integral(w, 1.0, 1.0, 1.0 - t);
}

JTable::JTable(const RadialWeight& w, double v_max, int per_unit) : w_(w), h_(1.0 / per_unit) {
  const int n = static_cast<int>(std::ceil(v_max * per_unit));
  const GaussRule& g = gauss_legendre(12);
  auto dJ = [&](double v) { return 1.0 / w_.tail_gap(std::exp(-v)); };
  J_.assign(n + 1, 0.0);
  dJ_.assign(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    dJ_[k] = dJ(k * h_);
    if (k == 0) continue;
    double s = 0.0;
    const double c = (k - 0.5) * h_;
    for (Eigen::Index i = 0; i < g.x.size(); ++i) s += g.w[i] * dJ(c + 0.5 * h_ * g.x[i]);
    J_[k] = J_[k - 1] + 0.5 * h_ * s;
  }
}

double JTable::at_gap(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("J table needs a gap in (0, 1]");
  const double v = -std::log(u);
  const int n = static_cast<int>(J_.size()) - 1;
  if (v >= n * h_) return J_[n] + dJ_[n] * (v - n * h_);
  const int k = std::min(static_cast<int>(v / h_), n - 1);
  const double x = (v - k * h_) / h_, x2 = x * x, x3 = x2 * x;
  return (2 * x3 - 3 * x2 + 1) * J_[k] + (x3 - 2 * x2 + x) * h_ * dJ_[k] +
         (-2 * x3 + 3 * x2) * J_[k + 1] + (x3 - x2) * h_ * dJ_[k + 1];
}

double JTable::operator()(double x) const { return x == 0.0 ? 0.0 : at_gap(1.0 - x); }

double schur_weight(const RadialWeight& w, double q, double r) {
  if (!(q > 1.0 && std::isfinite(q))) throw DomainError("Schur weight needs q in (1, inf)");
  const double qq = q * conjugate_exponent(q);
  return std::pow(w.tail(r), -1.0 / qq);
}

PolarSamples annulus_test(double t, double q, const Eigen::VectorXd& radii, int angles) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("annulus test needs t in (0, 1)");
  if (!(q > 0.0)) throw DomainError("annulus test needs q > 0");
  const Eigen::Index n = radii.size();
  if (n < 2 || !(radii[0] < t && t < radii[n - 1]))
    throw DomainError("radius grid must straddle t");
  Eigen::VectorXd edges = midpoint_edges(radii);
  Eigen::Index k = 1;
  while (radii[k] <= t) ++k;
  edges[k] = t;
  const double v = std::pow(t, -1.0 / q);
  Eigen::MatrixXcd vals = Eigen::MatrixXcd::Zero(n, angles);
  for (Eigen::Index i = k; i < n; ++i) vals.row(i).setConstant(v);
  return PolarSamples(radii, std::move(edges), std::move(vals));
}

double annulus_norm_q(const RadialWeight& w, double t) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("annulus norm needs t in (0, 1)");
  return weight_mass(w, t, 1.0, true) / t;
}

double divergence_functional(const RadialWeight& w, double q, double t) {
  if (!(q > 1.0 && std::isfinite(q))) throw DomainError("divergence functional needs q in (1, inf)");
  if (!(t >= 0.5 && t < 1.0)) throw DomainError("divergence functional needs t in [1/2, 1)");
  if (t == 0.5) return 0.0;
  // gap variable u = 1 - r over [1 - t, 1/2], graded toward the near-boundary end
  auto g = [&](double u) {
    const double J = u < 1.0 ? tail_power_integral(w, 1.0, 1.0, u) : 0.0;
    return std::pow(J + 1.0, q) * w.density_gap(u);
  };
  QuadOptions opt;
  opt.rel_tol = 1e-9;
  const double I = integrate_partition(g, octave_breaks(1.0 - t, 0.5), opt).value;
  return std::pow(I, 1.0 / q) * std::pow(w.tail(t), 1.0 / conjugate_exponent(q));
}

ProbeReport kernel_mean_probe(const RadialWeight& w, int N, int n_points, double s_max,
                              double a_abs, double tol) {
  if (n_points < 2 || !(s_max > 0.01 && s_max < a_abs && a_abs < 1.0))
    throw DomainError("bad kernel probe grid");
  ProbeReport rep;
  rep.label = "kernel_mean N=" + std::to_string(N) + " " + w.spec();
  const int D = required_kernel_degree(w, s_max, N, tol);
  const KernelTruncation ker = kernel_truncate(w, 2 * D);
  rep.audit.D = D;
  rep.audit.D2 = 2 * D;
  const double g0 = 0.99, g1 = 1.0 - s_max;
  std::vector<RatioSample> base, refined;
  for (int i = 0; i < n_points; ++i) {
    const double gap = g0 * std::pow(g1 / g0, double(i) / (n_points - 1));
    const double s = 1.0 - gap;
    const cdouble a(a_abs, 0.0);
    const double r = s / a_abs;
    const double l1 = kernel_derivative_mean(ker, a, r, N, D, tol);
    const double l2 = kernel_derivative_mean(ker, a, r, N, 2 * D, tol);
    const double rhs = kernel_mean_rhs(w, a, r, N);
    rep.grid.push_back({s, r, a_abs});
    rep.lhs.push_back(l2);
    rep.rhs.push_back(rhs);
    base.push_back({{s}, l1, rhs});
    refined.push_back({{s}, l2, rhs});
    rep.audit.max_rel_change = std::max(rep.audit.max_rel_change, std::abs(l2 - l1) / l2);
  }
  rep.audit.converged = rep.audit.max_rel_change < 1e-6;
  rep.ratio = summarize_ratios(base, refined);
  if (!rep.audit.converged) rep.ratio.verdict = Verdict::unconverged;
  return rep;
}

namespace {

// integral over s of T(s)^{-gamma} (1 + J(rs)) s omega(s) ds
double schur_integral(const RadialWeight& w, const JTable& J, double gamma, double r) {
  const RadialRule& R = w.rule();
  const RuleLevel& L = R.fine;
  const double gap_r = 1.0 - r;
  const int last = R.last_piece(std::max(gap_r * 1e-8, 1e-300));
  const int end = L.piece_end[last];
  const bool closed = R.tail_fine.size() == L.t.size();
  double s = 0.0;
  for (int i = 0; i < end; ++i) {
    const double T = closed ? R.tail_fine[i] : w.tail_gap(L.t[i]);
    s += std::pow(T, -gamma) * (1.0 + J.at_gap(gap_r + r * L.t[i])) * L.r[i] * L.w[i];
  }
  // below u0 the kernel factor is frozen at its value at 1 - u0
  const double u0 = R.piece_tlo[last];
  return s + (1.0 + J.at_gap(gap_r + r * u0)) * std::pow(R.tail_lo[last], 1.0 - gamma) /
                 (1.0 - gamma);
}

ProbeReport schur_probe(const RadialWeight& w, const JTable& J, double gamma,
                        const SweepGrid& grid, const std::string& label) {
  ProbeReport rep;
  rep.label = label;
  auto lhs = [&](const std::vector<double>& c) { return schur_integral(w, J, gamma, c[0]); };
  auto rhs = [&](const std::vector<double>& c) { return std::pow(w.tail(c[0]), -gamma); };
  rep.ratio = ratio_sweep(lhs, rhs, grid);
  for (const auto& smp : rep.ratio.samples) {
    rep.grid.push_back(smp.coord);
    rep.lhs.push_back(smp.lhs);
    rep.rhs.push_back(smp.rhs);
  }
  return rep;
}

}  // namespace

SchurReport schur_test_check(const RadialWeight& w, double q, const KernelTruncation& ker,
                             const SweepGrid& r_grid, const SweepGrid& s_grid) {
  if (!(q > 1.0 && std::isfinite(q))) throw DomainError("Schur test needs q in (1, inf)");
  check_kernel(w, ker);
  const JTable J(w);
  const double qp = conjugate_exponent(q);
  SchurReport rep;
  rep.first = schur_probe(w, J, 1.0 / q, r_grid, "schur first q=" + std::to_string(q));
  rep.second = schur_probe(w, J, 1.0 / qp, s_grid, "schur second q=" + std::to_string(q));

  // the model 1 + J(x) against the kernel mean at x = rs, r = |a| = sqrt(x)
  TruncationAudit audit;
  audit.D = ker.degree / 2;
  audit.D2 = ker.degree;
  rep.model_min = kInf;
  rep.model_max = 0.0;
  for (double x = 0.05; x <= 0.99 + 1e-12; x = 1.0 - (1.0 - x) * 0.75) {
    const double r = std::sqrt(x);
    double lo, hi;
    try {
      lo = kernel_derivative_mean(ker, r, r, 0, audit.D);
      hi = kernel_derivative_mean(ker, r, r, 0, audit.D2);
    } catch (const UnconvergedTruncation&) {
      break;
    }
    const double ratio = hi / (1.0 + J(x));
    rep.model_min = std::min(rep.model_min, ratio);
    rep.model_max = std::max(rep.model_max, ratio);
    audit.max_rel_change = std::max(audit.max_rel_change, std::abs(hi - lo) / hi);
  }
  audit.converged = audit.max_rel_change < 1e-6 && rep.model_max > 0.0;
  rep.first.audit = rep.second.audit = audit;
  return rep;
}

}  // namespace mixnorm
