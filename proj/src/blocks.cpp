#include "mixnorm/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "mixnorm/errors.hpp"

namespace mixnorm {

namespace {

double glue(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

constexpr double kGapFloor = 1e-12;

// M_n = floor(1 / gap), snapped when 1 / gap is an integer up to rounding
std::int64_t floor_inverse(double gap) {
  const double x = 1.0 / gap;
  const double n = std::round(x);
  if (std::abs(x - n) <= 1e-9 * x) return static_cast<std::int64_t>(n);
  return static_cast<std::int64_t>(std::floor(x));
}

// largest gap t in (0, 1] with T(t) <= target; T is nondecreasing in t
double solve_gap(const RadialWeight& w, double target) {
  double lo = std::ldexp(1.0, -110), hi = 1.0;
  if (w.tail_gap(hi) <= target) return hi;
  if (w.tail_gap(lo) > target) return lo;
  // bisect in log t first, then linearly to full resolution
  for (int i = 0; i < 200 && hi / lo > 1.0 + 1e-15; ++i) {
    const double mid = i < 100 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (w.tail_gap(mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

double CutoffSpec::psi(double t) const {
  if (t <= 1.0) return 1.0;
  if (t >= k) return 0.0;
  const double a = glue(k - t), b = glue(t - 1.0);
  return a / (a + b);
}

// ---- schedules ----

double choose_K(const RadialWeight& w, double margin) {
  const auto grid = certification_grid();
  if (!certify_upper_doubling(w, grid).certified)
    throw PreconditionError("choose_K needs a weight certified in the upper doubling class");
  const double base = w.tail0() / w.tail(0.5);
  double K = kInf;
  for (double C : {1.0, 2.0}) {
    const double a0 = empirical_alpha0(w, C, grid);
    K = std::min(K, std::max(base, C * std::pow(3.0, a0)));
  }
  K *= 1.0 + margin;
  for (int tries = 0; tries < 20; ++tries, K *= 1.5)
    if (is_lacunary(build_schedule(w, K).M_seq).first) return K;
  throw NumericError("no lacunary schedule found", K);
}

BlockSchedule build_schedule(const RadialWeight& w, double K, int n_max) {
  if (!(K > 1.0)) throw DomainError("schedule ratio K must exceed 1");
  if (n_max < 0) throw DomainError("n_max must be nonnegative");
  BlockSchedule s;
  s.weight = w;
  s.K = K;
  const double T0 = w.tail0();
  for (int n = 0; n <= n_max; ++n) {
    const double gap = n == 0 ? 1.0 : solve_gap(w, T0 * std::pow(K, -n));
    if (gap < kGapFloor) {
      s.truncated = true;
      std::cerr << "warning: schedule for " << w.spec() << " stops at n = " << n - 1
                << " (1 - r_n below 1e-12)\n";
      break;
    }
    s.gap_seq.push_back(gap);
    s.r_seq.push_back(1.0 - gap);
    s.M_seq.push_back(floor_inverse(gap));
  }
  double ratio = kInf;
  for (std::size_t n = 1; n + 1 < s.M_seq.size(); ++n)
    ratio = std::min(ratio, static_cast<double>(s.M_seq[n + 1]) / s.M_seq[n]);
  s.lacunary_ratio = ratio;
  return s;
}

std::pair<bool, double> is_lacunary(const std::vector<std::int64_t>& seq) {
  if (seq.empty()) throw DomainError("empty sequence");
  double ratio = kInf;
  for (std::size_t n = 0; n + 1 < seq.size(); ++n) {
    if (seq[n] <= 0) return {false, 0.0};
    ratio = std::min(ratio, static_cast<double>(seq[n + 1]) / seq[n]);
  }
  return {ratio > 1.0 + 1e-9, ratio};
}

AnalyticPoly build_vnk(const CutoffSpec& cut, int n) {
  if (n < 0) throw DomainError("block index must be nonnegative");
  if (cut.k < 2) throw DomainError("cutoff parameter k must exceed 1");
  const double k = cut.k;
  if (n == 0) {
    Eigen::VectorXcd c(cut.k);
    for (int j = 0; j < cut.k; ++j) c[j] = cut.psi(j);
    return AnalyticPoly(std::move(c));
  }
  const double scale = std::pow(k, n - 1);
  const auto hi = static_cast<Eigen::Index>(std::llround(scale * k * k));
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(hi);
  for (Eigen::Index j = static_cast<Eigen::Index>(scale); j < hi; ++j) {
    const double t = j / scale;
    c[j] = cut.psi(t / k) - cut.psi(t);
  }
  return AnalyticPoly(std::move(c));
}

// ---- block basis ----

BlockBasis::BlockBasis(BlockSchedule schedule, int N, CutoffSpec cut)
    : sched_(std::move(schedule)), N_(N), cut_(cut) {
  if (N_ < 1) throw DomainError("overlap parameter N must be at least 1");
  if (cut_.k < 2) throw DomainError("cutoff parameter k must exceed 1");
  if (!is_lacunary(sched_.M_seq).first)
    throw PreconditionError("block basis needs a lacunary schedule");
  n_blocks_ = sched_.n_max() - N_ + 1;
  if (n_blocks_ < 1) throw DomainError("schedule too short for the overlap parameter");
}

std::int64_t BlockBasis::M(int n) const { return n < 0 ? 0 : sched_.M_seq.at(n); }

std::int64_t BlockBasis::coverage() const { return M(n_blocks_ - 1); }

double BlockBasis::rise(int n, std::int64_t j) const {
  if (n == 0) return 1.0;
  if (n > n_blocks_) return 0.0;
  const std::int64_t a = M(n - 1), b = M(n + N_ - 1);
  if (j <= a) return 0.0;
  if (j >= b) return 1.0;
  return cut_.ramp(static_cast<double>(j - a) / static_cast<double>(b - a));
}

std::pair<std::int64_t, std::int64_t> BlockBasis::support(int n) const {
  if (n < 0 || n >= n_blocks_) throw DomainError("block index out of range");
  return {M(n - 1), M(n + N_)};
}

double BlockBasis::coeff(int n, std::int64_t j) const {
  if (n < 0 || n >= n_blocks_ || j < 0) return 0.0;
  return rise(n, j) - rise(n + 1, j);
}

AnalyticPoly BlockBasis::window(int n) const {
  const auto [lo, hi] = support(n);
  if (hi > (std::int64_t{1} << 26)) throw DomainError("window too wide to materialize");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(hi);
  for (std::int64_t j = lo; j < hi; ++j) c[j] = coeff(n, j);
  return AnalyticPoly(std::move(c));
}

AnalyticPoly block_project(const BlockBasis& basis, int n, const AnalyticPoly& f) {
  if (n < 0 || n >= basis.n_blocks()) return AnalyticPoly();
  const auto [lo, hi] = basis.support(n);
  const std::int64_t top = std::min<std::int64_t>(hi, f.degree() + 1);
  if (lo >= top) return AnalyticPoly();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(top);
  for (std::int64_t j = lo; j < top; ++j) c[j] = basis.coeff(n, j) * f.coeff(static_cast<int>(j));
  return AnalyticPoly(std::move(c));
}

// ---- decomposition norms ----

std::vector<double> block_norms(const AnalyticPoly& f, const BlockBasis& basis,
                                const InnerSpec& X) {
  if (f.degree() > basis.coverage())
    throw PreconditionError("polynomial degree exceeds the block coverage");
  std::vector<double> out;
  for (int n = 0; n < basis.n_blocks(); ++n) {
    if (basis.support(n).first > f.degree()) break;
    out.push_back(inner_norm(block_project(basis, n, f), X.X, X.p));
  }
  return out;
}

double lqs_norm(const AnalyticPoly& f, const BlockBasis& basis, double s, double q,
                const InnerSpec& X) {
  if (!(q > 0.0)) throw DomainError("outer exponent must be positive");
  const auto b = block_norms(f, basis, X);
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t n = 0; n < b.size(); ++n) m = std::max(m, std::exp2(-s * n) * b[n]);
    return m;
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < b.size(); ++n) sum += std::pow(std::exp2(-s * n) * b[n], q);
  return std::pow(sum, 1.0 / q);
}

double decomposition_norm(const AnalyticPoly& f, const BlockBasis& basis, const InnerSpec& X,
                          double q) {
  if (!(q > 0.0)) throw DomainError("outer exponent must be positive");
  const auto b = block_norms(f, basis, X);
  const double K = basis.K();
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t n = 0; n < b.size(); ++n) m = std::max(m, std::pow(K, -double(n)) * b[n]);
    return m;
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < b.size(); ++n) sum += std::pow(K, -double(n)) * std::pow(b[n], q);
  return std::pow(sum, 1.0 / q);
}

}  // namespace mixnorm
