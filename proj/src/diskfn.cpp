#include "mixnorm/diskfn.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

#include "mixnorm/errors.hpp"

namespace mixnorm {

namespace {

const double kTwoPi = 2.0 * M_PI;
const double kGolden = 0.5 * (std::sqrt(5.0) - 1.0);

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  return fft;
}

// golden-section search for a max of h on [a, b]
double golden_max(const std::function<double(double)>& h, double a, double b, double best,
                  int iters = 60) {
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = h(x1), f2 = h(x2);
  best = std::max({best, f1, f2});
  for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = h(x2);
      best = std::max(best, f2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = h(x1);
      best = std::max(best, f1);
    }
  }
  return best;
}

// sum |c_k|^2 r^{2k}
double parseval_mean2(const AnalyticPoly& f, double r) {
  const auto& c = f.coeffs();
  const double r2 = r * r;
  double s = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) s = s * r2 + std::norm(c[k]);
  return s;
}

double mean_pow(const AnalyticPoly& f, double r, double p, double q) {
  if (p == 2.0) return std::pow(parseval_mean2(f, r), 0.5 * q);
  return std::pow(integral_mean(f, r, p), q);
}

double radius_factor(MeasureConvention c, double r) {
  return c == MeasureConvention::with_r ? r : 1.0;
}

// lump radius for polynomial integrands: the rule is only cut where the
// integrand is flat to double precision
double poly_tau(const AnalyticPoly& f) { return 1e-17 / (f.degree() + 1.0); }

}  // namespace

// ---- AnalyticPoly ----

AnalyticPoly::AnalyticPoly(Eigen::VectorXcd coeffs) : c_(std::move(coeffs)) { normalize(); }

AnalyticPoly::AnalyticPoly(std::initializer_list<cdouble> coeffs)
    : c_(static_cast<Eigen::Index>(coeffs.size())) {
  Eigen::Index k = 0;
  for (auto v : coeffs) c_[k++] = v;
  normalize();
}

void AnalyticPoly::normalize() {
  Eigen::Index n = c_.size();
  while (n > 1 && c_[n - 1] == 0.0) --n;
  if (n == 0) {
    c_ = Eigen::VectorXcd::Zero(1);
    return;
  }
  c_.conservativeResize(n);
}

AnalyticPoly AnalyticPoly::monomial(int k, cdouble a) {
  if (k < 0) throw DomainError("monomial degree must be nonnegative");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(k + 1);
  c[k] = a;
  return AnalyticPoly(std::move(c));
}

cdouble AnalyticPoly::operator()(cdouble z) const {
  cdouble s = 0.0;
  for (Eigen::Index k = c_.size() - 1; k >= 0; --k) s = s * z + c_[k];
  return s;
}

AnalyticPoly AnalyticPoly::derivative(int order) const {
  if (order < 0) throw DomainError("derivative order must be nonnegative");
  if (order > degree()) return AnalyticPoly();
  Eigen::VectorXcd d(c_.size() - order);
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    double fall = 1.0;
    for (int i = 0; i < order; ++i) fall *= static_cast<double>(j + order - i);
    d[j] = fall * c_[j + order];
  }
  return AnalyticPoly(std::move(d));
}

AnalyticPoly AnalyticPoly::operator+(const AnalyticPoly& o) const {
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(std::max(c_.size(), o.c_.size()));
  s.head(c_.size()) += c_;
  s.head(o.c_.size()) += o.c_;
  return AnalyticPoly(std::move(s));
}

AnalyticPoly AnalyticPoly::operator-(const AnalyticPoly& o) const { return *this + o * -1.0; }

AnalyticPoly AnalyticPoly::operator*(cdouble s) const { return AnalyticPoly(c_ * s); }

// ---- PolarSamples ----

Eigen::VectorXd midpoint_edges(const Eigen::VectorXd& r) {
  const Eigen::Index n = r.size();
  Eigen::VectorXd e(n + 1);
  e[0] = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) e[j] = 0.5 * (r[j - 1] + r[j]);
  e[n] = 1.0;
  return e;
}

PolarSamples::PolarSamples(Eigen::VectorXd r, Eigen::MatrixXcd v)
    : PolarSamples(r, midpoint_edges(r), std::move(v)) {}

PolarSamples::PolarSamples(Eigen::VectorXd r, Eigen::VectorXd e, Eigen::MatrixXcd v)
    : radii(std::move(r)), edges(std::move(e)), values(std::move(v)) {
  const Eigen::Index n = radii.size();
  if (n == 0) throw DomainError("polar samples need at least one radius");
  if (values.rows() != n) throw DomainError("sample rows must match the radii");
  const long m = values.cols();
  if (m < 1 || (m & (m - 1)) != 0) throw DomainError("angle count must be a power of two");
  if (edges.size() != n + 1) throw DomainError("need one more edge than radii");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(radii[j] >= 0.0 && radii[j] < 1.0)) throw DomainError("radii must lie in [0, 1)");
    if (j > 0 && !(radii[j] > radii[j - 1])) throw DomainError("radii must increase");
    if (!(edges[j] <= radii[j] && radii[j] <= edges[j + 1]))
      throw DomainError("each radius must lie inside its cell");
  }
  if (edges[0] < 0.0 || edges[n] > 1.0) throw DomainError("cell edges must lie in [0, 1]");
}

double PolarSamples::theta(int m) const { return kTwoPi * m / angle_count(); }

int PolarSamples::radius_index(double r) const {
  const double* b = radii.data();
  const double* e = b + radii.size();
  const double* it = std::lower_bound(b, e, r - 1e-14);
  if (it == e || std::abs(*it - r) > 1e-14) throw DomainError("radius is not a grid radius");
  return static_cast<int>(it - b);
}

// ---- integral means ----

int next_pow2(long n) {
  long m = 1;
  while (m < n) m <<= 1;
  return static_cast<int>(m);
}

int circle_sample_count(int degree) {
  return next_pow2(std::max(8L * (degree + 1), 256L));
}

Eigen::VectorXcd circle_values(const AnalyticPoly& f, double r, int N) {
  if (N <= 0) N = circle_sample_count(f.degree());
  const auto& c = f.coeffs();
  Eigen::VectorXcd spec = Eigen::VectorXcd::Zero(N);
  // aliasing folds k into k mod N, exact when N > degree
  double rk = 1.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    spec[k % N] += c[k] * rk;
    rk *= r;
    if (rk == 0.0) break;
  }
  Eigen::VectorXcd out(N);
  fft_engine().inv(out, spec);
  return out;
}

double mean_of_samples(const Eigen::Ref<const Eigen::VectorXcd>& v, double p) {
  if (!(p > 0.0)) throw DomainError("integral mean exponent must be positive");
  if (v.size() == 0) return 0.0;
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  if (p == 2.0) return std::sqrt(v.squaredNorm() / v.size());
  const double s = v.cwiseAbs().array().pow(p).sum() / v.size();
  return std::pow(s, 1.0 / p);
}

double circle_sup(const AnalyticPoly& f, double r) {
  if (f.degree() == 0 || r == 0.0) return std::abs(f.coeff(0));
  const int N = circle_sample_count(f.degree());
  const Eigen::VectorXcd v = circle_values(f, r, N);
  Eigen::Index m = 0;
  const double best = v.cwiseAbs().maxCoeff(&m);
  const double th = kTwoPi * m / N, h = kTwoPi / N;
  auto g = [&](double t) { return std::abs(f(std::polar(r, t))); };
  return golden_max(g, th - h, th + h, best);
}

double integral_mean(const AnalyticPoly& f, double r, double p) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("integral mean radius must lie in [0, 1]");
  if (!(p > 0.0)) throw DomainError("integral mean exponent must be positive");
  if (std::isinf(p)) return circle_sup(f, r);
  return mean_of_samples(circle_values(f, r), p);
}

double integral_mean(const PolarSamples& f, double r, double p) {
  return mean_of_samples(f.values.row(f.radius_index(r)).transpose(), p);
}

// ---- radial suprema ----

double radial_sup(const std::function<double(double)>& h, int octaves) {
  const int per_octave = 8;
  const int n = per_octave * octaves;
  std::vector<double> r(n + 2), v(n + 2);
  r[0] = 0.0;
  for (int j = 0; j <= n; ++j) r[j + 1] = 1.0 - std::exp2(-static_cast<double>(j) / per_octave);
  // j = 0 repeats r = 0; keep it so neighbours exist on both sides
  for (std::size_t i = 0; i < r.size(); ++i) v[i] = h(r[i]);
  const auto it = std::max_element(v.begin(), v.end());
  const std::size_t i = static_cast<std::size_t>(it - v.begin());
  const double a = r[i == 0 ? 0 : i - 1], b = r[std::min(i + 1, r.size() - 1)];
  if (!(b > a)) return *it;
  return golden_max(h, a, b, *it, 50);
}

// ---- mixed norms ----

double mixed_norm(const AnalyticPoly& f, const NormSpec& spec) {
  if (spec.inner != InnerSpace::Hp) return space_norm_Xq(f, spec);
  if (std::isinf(spec.q)) return mixed_norm_weak(f, spec.weight, spec.p);
  if (!(spec.q > 0.0)) throw DomainError("outer exponent must be positive");
  if (f.is_zero()) return 0.0;
  const auto conv = spec.convention;
  const double s = rule_integrate(
      spec.weight,
      [&](double r, double) { return mean_pow(f, r, spec.p, spec.q) * radius_factor(conv, r); },
      poly_tau(f));
  return std::pow(s, 1.0 / spec.q);
}

double mixed_norm(const PolarSamples& f, const NormSpec& spec) {
  if (spec.inner != InnerSpace::Hp)
    throw DomainError("sampled functions support Hp inner norms only");
  if (std::isinf(spec.q)) return mixed_norm_weak(f, spec.weight, spec.p);
  if (!(spec.q > 0.0)) throw DomainError("outer exponent must be positive");
  const bool with_r = spec.convention == MeasureConvention::with_r;
  double s = 0.0;
  for (Eigen::Index j = 0; j < f.radii.size(); ++j) {
    const double m = mean_of_samples(f.values.row(j).transpose(), spec.p);
    if (m == 0.0) continue;
    s += std::pow(m, spec.q) * weight_mass(spec.weight, f.edges[j], f.edges[j + 1], with_r);
  }
  return std::pow(s, 1.0 / spec.q);
}

double mixed_norm_weak(const AnalyticPoly& f, const RadialWeight& w, double p) {
  if (f.is_zero()) return 0.0;
  auto h = [&](double r) {
    return p == 2.0 ? std::sqrt(parseval_mean2(f, r)) * w.tail(r)
                    : integral_mean(f, r, p) * w.tail(r);
  };
  return radial_sup(h, 60);
}

double mixed_norm_weak(const PolarSamples& f, const RadialWeight& w, double p) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < f.radii.size(); ++j)
    best = std::max(best, mean_of_samples(f.values.row(j).transpose(), p) * w.tail(f.radii[j]));
  return best;
}

double space_norm_Xq(const AnalyticPoly& f, const NormSpec& spec) {
  if (spec.inner == InnerSpace::Hp) {
    NormSpec s = spec;
    return mixed_norm(f, s);
  }
  if (f.is_zero()) return 0.0;
  auto inner_at = [&](double r) { return inner_norm(dilate(f, r), spec.inner, spec.p); };
  if (std::isinf(spec.q))
    return radial_sup([&](double r) { return inner_at(r) * spec.weight.tail(r); }, 40);
  if (!(spec.q > 0.0)) throw DomainError("outer exponent must be positive");
  const double s = rule_integrate(
      spec.weight,
      [&](double r, double) {
        return std::pow(inner_at(r), spec.q) * radius_factor(spec.convention, r);
      },
      poly_tau(f), true);
  return std::pow(s, 1.0 / spec.q);
}

// ---- inner norms ----

double inner_norm(const AnalyticPoly& f, InnerSpace X, double p) {
  switch (X) {
    case InnerSpace::Hp:
      return hardy_norm(f, p);
    case InnerSpace::Bloch:
      return bloch_norm(f);
    case InnerSpace::BMOA:
      return bmoa_norm(f);
  }
  return 0.0;
}

double hardy_norm(const AnalyticPoly& f, double p) {
  if (p == 2.0) return f.coeffs().norm();
  return integral_mean(f, 1.0, p);
}

double bloch_norm(const AnalyticPoly& f) {
  const double f0 = std::abs(f.coeff(0));
  if (f.degree() == 0) return f0;
  const AnalyticPoly d = f.derivative();
  // past t ~ 2^-12 / deg the factor (1 - r^2) has already killed the sup
  const int octaves = static_cast<int>(std::ceil(std::log2(f.degree() + 1.0))) + 12;
  return f0 + radial_sup([&](double r) { return (1.0 - r * r) * circle_sup(d, r); }, octaves);
}

double bmoa_norm(const AnalyticPoly& f) {
  const double f0 = std::abs(f.coeff(0));
  if (f.degree() == 0) return f0;
  const int d = f.degree();
  const int jmax = 2 * (static_cast<int>(std::ceil(std::log2(d + 1.0))) + 6);
  const int n_ang = next_pow2(std::max(8, 4 * (d + 1)));
  double best = 0.0;
  for (int j = 0; j <= jmax; ++j) {
    const double rho = j == 0 ? 0.0 : 1.0 - std::exp2(-0.5 * j);
    const int N = next_pow2(std::min<long>(
        1L << 18, static_cast<long>(8.0 * (d + 1) * 2.0 / (1.0 - rho))));
    for (int a_i = 0; a_i < (j == 0 ? 1 : n_ang); ++a_i) {
      const cdouble a = std::polar(rho, kTwoPi * a_i / n_ang);
      const cdouble fa = f(a);
      double s = 0.0;
      for (int m = 0; m < N; ++m) {
        const cdouble z = std::polar(1.0, kTwoPi * m / N);
        s += std::norm(f((a - z) / (1.0 - std::conj(a) * z)) - fa);
      }
      best = std::max(best, s / N);
    }
  }
  return f0 + std::sqrt(best);
}

// ---- coefficient operations ----

AnalyticPoly hadamard(const AnalyticPoly& f, const AnalyticPoly& g) {
  const Eigen::Index n = std::min(f.coeffs().size(), g.coeffs().size());
  return AnalyticPoly(Eigen::VectorXcd(f.coeffs().head(n).cwiseProduct(g.coeffs().head(n))));
}

AnalyticPoly dilate(const AnalyticPoly& f, cdouble s) {
  if (std::abs(s) > 1.0 + 1e-15) throw DomainError("dilation factor must satisfy |s| <= 1");
  Eigen::VectorXcd c = f.coeffs();
  cdouble sk = 1.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    c[k] *= sk;
    sk *= s;
  }
  return AnalyticPoly(std::move(c));
}

AnalyticPoly cesaro_mean(const AnalyticPoly& f, int n) {
  if (n < 0) throw DomainError("Cesaro index must be nonnegative");
  const Eigen::Index m = std::min<Eigen::Index>(f.coeffs().size(), n + 1);
  Eigen::VectorXcd c = f.coeffs().head(m);
  for (Eigen::Index j = 0; j < m; ++j) c[j] *= 1.0 - static_cast<double>(j) / (n + 1);
  return AnalyticPoly(std::move(c));
}

}  // namespace mixnorm
