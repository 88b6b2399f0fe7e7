#include "mixnorm/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "mixnorm/errors.hpp"
#include "mixnorm/quadrature.hpp"
#include "mixnorm/special.hpp"

namespace mixnorm {

namespace {

constexpr int kHeadOctaves = 30;
constexpr int kTailOctaves = 110;
constexpr int kFineOrder = 16;
constexpr int kCoarseOrder = 10;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

class StandardModel final : public WeightModel {
 public:
  explicit StandardModel(double a) : a_(a) {
    if (!(a > -1.0)) throw DomainError("standard weight needs alpha > -1");
  }
  WeightFamily family() const override { return WeightFamily::standard; }
  std::string spec() const override { return "std:" + num(a_); }
  std::vector<double> params() const override { return {a_}; }
  double density_gap(double t) const override {
    return (a_ + 1.0) * std::pow(t * (2.0 - t), a_);
  }
  bool has_closed_tail() const override { return true; }
  double tail_gap_closed(double t) const override {
    if (t <= 0.0) return 0.0;
    // (a+1) 2^a sum_k binom(a,k) (-1/2)^k t^{a+k+1} / (a+k+1)
    double c = 1.0, p = std::pow(t, a_ + 1.0), s = 0.0;
    for (int k = 0; k < 400; ++k) {
      const double term = c * p / (a_ + k + 1.0);
      s += term;
      if (k > 0 && std::abs(term) <= 1e-18 * std::abs(s)) break;
      c *= -0.5 * (a_ - k) / (k + 1.0);
      p *= t;
      if (c == 0.0) break;
    }
    return (a_ + 1.0) * std::exp2(a_) * s;
  }
  std::optional<double> moment_closed(double x) const override {
    return 0.5 * (a_ + 1.0) * beta_function(0.5 * (x + 1.0), a_ + 1.0);
  }
  std::optional<double> tail_power_closed(double m, double g, double tau) const override {
    if (a_ != 0.0) return std::nullopt;
    const double e = m + g - 1.0;
    if (e == 0.0) return -std::log(tau);
    return (std::pow(tau, -e) - 1.0) / e;
  }

 private:
  double a_;
};

class LogModel final : public WeightModel {
 public:
  explicit LogModel(double k) : k_(k) {
    if (!(k > 1.0)) throw DomainError("logarithmic weight needs kappa > 1");
  }
  WeightFamily family() const override { return WeightFamily::logarithmic; }
  std::string spec() const override { return "log:" + num(k_); }
  std::vector<double> params() const override { return {k_}; }
  double density_gap(double t) const override {
    const double L = 1.0 - std::log(t);
    return 1.0 / (t * std::pow(L, k_));
  }
  bool has_closed_tail() const override { return true; }
  double tail_gap_closed(double t) const override {
    if (t <= 0.0) return 0.0;
    return std::pow(1.0 - std::log(t), 1.0 - k_) / (k_ - 1.0);
  }
  std::optional<double> tail_power_closed(double m, double g, double tau) const override {
    if (m != 1.0) return std::nullopt;
    const double L = 1.0 - std::log(tau), e = (k_ - 1.0) * g + 1.0;
    return std::pow(k_ - 1.0, g) * (std::pow(L, e) - 1.0) / e;
  }

 private:
  double k_;
};

class ExpModel final : public WeightModel {
 public:
  explicit ExpModel(double c) : c_(c) {
    if (!(c > 0.0)) throw DomainError("exponential weight needs c > 0");
  }
  WeightFamily family() const override { return WeightFamily::exponential; }
  std::string spec() const override { return "exp:" + num(c_); }
  std::vector<double> params() const override { return {c_}; }
  double density_gap(double t) const override { return t > 0 ? std::exp(-c_ / t) : 0.0; }

 private:
  double c_;
};

// Piecewise linear density; everything is exact for the interpolant.
class TabulatedModel final : public WeightModel {
 public:
  TabulatedModel(std::vector<double> r, std::vector<double> v) : r_(std::move(r)), v_(std::move(v)) {
    if (r_.size() != v_.size() || r_.size() < 2)
      throw DomainError("tabulated weight needs matching r/omega columns with >= 2 rows");
    if (r_.front() != 0.0 || r_.back() != 1.0)
      throw DomainError("tabulated weight nodes must start at 0 and end at 1");
    for (std::size_t i = 0; i < r_.size(); ++i) {
      if (!(v_[i] >= 0.0) || !std::isfinite(v_[i]))
        throw DomainError("tabulated weight values must be finite and >= 0");
      if (i > 0 && !(r_[i] > r_[i - 1])) throw DomainError("tabulated nodes must increase");
    }
    const std::size_t n = r_.size();
    g_.resize(n);
    for (std::size_t i = 0; i < n; ++i) g_[i] = 1.0 - r_[i];
    cum_.assign(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;)
      cum_[i] = cum_[i + 1] + 0.5 * (v_[i] + v_[i + 1]) * (g_[i] - g_[i + 1]);
    // omega-hat > 0 on [0,1) needs mass arbitrarily close to 1
    if (v_[n - 1] <= 0.0 && v_[n - 2] <= 0.0)
      throw DomainError("tabulated weight has zero tail before r = 1");
  }
  WeightFamily family() const override { return WeightFamily::tabulated; }
  std::string spec() const override { return "table:" + std::to_string(r_.size()); }
  std::vector<double> params() const override { return {}; }
  const std::vector<double>& nodes() const { return r_; }
  const std::vector<double>& values() const { return v_; }

  double density_gap(double t) const override {
    const std::size_t i = segment(t);
    const double h = g_[i] - g_[i + 1];
    const double u = (g_[i] - t) / h;  // 0 at r_i, 1 at r_{i+1}
    return v_[i] * (1.0 - u) + v_[i + 1] * u;
  }
  bool has_closed_tail() const override { return true; }
  double tail_gap_closed(double t) const override {
    if (t <= 0.0) return 0.0;
    const std::size_t i = segment(t);
    return cum_[i + 1] + 0.5 * (t - g_[i + 1]) * (density_gap(t) + v_[i + 1]);
  }
  std::optional<double> moment_closed(double x) const override {
    const auto& gl = gauss_legendre(24);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
      const double a = r_[i], b = r_[i + 1], h = b - a;
      if (a > 0.0 && x * std::log(b / a) <= 30.0) {
        double part = 0.0;
        for (int k = 0; k < gl.x.size(); ++k) {
          const double u = 0.5 * (1.0 + gl.x[k]);
          const double rr = a + h * u;
          part += gl.w[k] * std::pow(rr, x) * (v_[i] * (1.0 - u) + v_[i + 1] * u);
        }
        s += 0.5 * h * part;
      } else {
        const double x1 = x + 1.0, x2 = x + 2.0;
        const double ax = a > 0 ? std::pow(a, x1) : 0.0, bx = std::pow(b, x1);
        const double i1 = bx * b / (x1 * x2) - ax * ((x1 * h + b) / (x1 * x2));
        const double i2 = bx * ((x1 * h - a) / (x1 * x2)) + ax * a / (x1 * x2);
        s += (v_[i] * i1 + v_[i + 1] * i2) / h;
      }
    }
    return s;
  }
  std::vector<double> kinks() const override {
    return std::vector<double>(r_.begin() + 1, r_.end() - 1);
  }

 private:
  // segment i with g_[i+1] <= t <= g_[i]
  std::size_t segment(double t) const {
    std::size_t lo = 0, hi = g_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (g_[mid] >= t) lo = mid;
      else hi = mid;
    }
    return lo;
  }
  std::vector<double> r_, v_, g_, cum_;
};

class BetaModel final : public WeightModel {
 public:
  BetaModel(RadialWeight base, double b) : base_(std::move(base)), b_(b) {
    if (!(b > 0.0)) throw DomainError("beta modulation needs beta > 0");
  }
  WeightFamily family() const override { return WeightFamily::beta_modulated; }
  std::string spec() const override { return "beta:" + base_.spec() + ":" + num(b_); }
  std::vector<double> params() const override { return {b_}; }
  double density_gap(double t) const override {
    return std::pow(t * (2.0 - t), b_) * base_.density_gap(t);
  }
  std::vector<double> kinks() const override { return base_.model().kinks(); }

 private:
  RadialWeight base_;
  double b_;
};

class PowerModel final : public WeightModel {
 public:
  PowerModel(RadialWeight base, double a) : base_(std::move(base)), a_(a) {
    if (!(a > 0.0)) throw DomainError("power transform needs alpha > 0");
  }
  WeightFamily family() const override { return WeightFamily::power_transform; }
  std::string spec() const override { return "pow:" + base_.spec() + ":" + num(a_); }
  std::vector<double> params() const override { return {a_}; }
  double density_gap(double t) const override {
    if (a_ == 1.0) return base_.density_gap(t);
    return base_.density_gap(t) * std::pow(base_.tail_gap(t), a_ - 1.0);
  }
  bool has_closed_tail() const override { return true; }
  double tail_gap_closed(double t) const override {
    return std::pow(base_.tail_gap(t), a_) / a_;
  }
  std::optional<double> tail_power_closed(double m, double g, double tau) const override {
    return std::pow(a_, g) * tail_power_integral(base_, m, a_ * g, tau);
  }
  std::vector<double> kinks() const override { return base_.model().kinks(); }

 private:
  RadialWeight base_;
  double a_;
};

void build_level(const WeightModel& m, const std::vector<std::pair<double, double>>& pieces,
                 int n_rpieces, int order, RuleLevel& L) {
  const auto& gl = gauss_legendre(order);
  const int n = static_cast<int>(pieces.size()) * order;
  L.r.resize(n);
  L.t.resize(n);
  L.logr.resize(n);
  L.w.resize(n);
  L.len_w.resize(n);
  L.piece_end.clear();
  int k = 0;
  for (int p = 0; p < static_cast<int>(pieces.size()); ++p) {
    const auto [lo, hi] = pieces[p];
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    const bool in_r = p < n_rpieces;
    for (int j = 0; j < order; ++j) {
      // t-pieces are walked from high t to low t so r keeps increasing
      const double x = in_r ? gl.x[j] : -gl.x[j];
      const double v = mid + half * x;
      const double r = in_r ? v : 1.0 - v;
      const double t = in_r ? 1.0 - v : v;
      L.r[k] = r;
      L.t[k] = t;
      L.logr[k] = in_r ? std::log(r) : std::log1p(-t);
      L.len_w[k] = half * gl.w[j];
      L.w[k] = L.len_w[k] * m.density_gap(t);
      ++k;
    }
    L.piece_end.push_back(k);
  }
}

}  // namespace

double WeightModel::tail_gap_closed(double) const {
  throw PreconditionError("weight family has no closed-form tail");
}

std::string to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::standard: return "standard";
    case WeightFamily::logarithmic: return "logarithmic";
    case WeightFamily::exponential: return "exponential";
    case WeightFamily::tabulated: return "tabulated";
    case WeightFamily::beta_modulated: return "beta_modulated";
    case WeightFamily::power_transform: return "power_transform";
  }
  return "unknown";
}

int RadialRule::last_piece(double tau) const {
  int last = 0;
  for (int p = 0; p < static_cast<int>(piece_tlo.size()); ++p) {
    if (piece_tlo[p] >= tau) last = p;
    else break;
  }
  return last;
}

struct RadialWeight::Cache {
  std::shared_mutex mu;
  std::unordered_map<double, double> moments;
  std::once_flag rule_once;
  std::unique_ptr<RadialRule> rule;
  std::once_flag tail0_once;
  double tail0 = 0.0;
};

RadialWeight::RadialWeight(std::shared_ptr<const WeightModel> model)
    : model_(std::move(model)), cache_(std::make_shared<Cache>()) {}

RadialWeight RadialWeight::standard(double alpha) {
  return RadialWeight(std::make_shared<StandardModel>(alpha));
}
RadialWeight RadialWeight::logarithmic(double kappa) {
  return RadialWeight(std::make_shared<LogModel>(kappa));
}
RadialWeight RadialWeight::exponential(double c) {
  return RadialWeight(std::make_shared<ExpModel>(c));
}
RadialWeight RadialWeight::tabulated(std::vector<double> r, std::vector<double> omega) {
  return RadialWeight(std::make_shared<TabulatedModel>(std::move(r), std::move(omega)));
}

RadialWeight beta_modulated(const RadialWeight& w, double beta) {
  return RadialWeight(std::make_shared<BetaModel>(w, beta));
}

RadialWeight power_transform(const RadialWeight& w, double alpha) {
  return RadialWeight(std::make_shared<PowerModel>(w, alpha));
}

TailMode RadialWeight::tail_mode() const {
  return model_->has_closed_tail() ? TailMode::closed_form : TailMode::quadrature;
}

double RadialWeight::density(double r) const {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("density needs r in [0, 1)");
  return model_->density_gap(1.0 - r);
}

double RadialWeight::tail(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("tail needs r in [0, 1]");
  return tail_gap(1.0 - r);
}

double RadialWeight::tail_gap(double t) const {
  if (t <= 0.0) return 0.0;
  if (model_->has_closed_tail()) return model_->tail_gap_closed(t);
  std::vector<double> br = octave_breaks(0.0, t, 80);
  for (double k : model_->kinks())
    if (1.0 - k > 0.0 && 1.0 - k < t) br.push_back(1.0 - k);
  std::sort(br.begin(), br.end());
  QuadOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-300;
  opt.max_intervals = 20000;
  return integrate_partition([&](double s) { return model_->density_gap(s); }, br, opt).value;
}

double RadialWeight::tail0() const {
  std::call_once(cache_->tail0_once, [&] { cache_->tail0 = tail_gap(1.0); });
  return cache_->tail0;
}

const RadialRule& RadialWeight::rule() const {
  std::call_once(cache_->rule_once, [&] {
    auto R = std::make_unique<RadialRule>();
    std::vector<double> rb{0.0}, tb;
    for (int k = kHeadOctaves; k >= 1; --k) rb.push_back(std::ldexp(1.0, -k));
    for (int k = 1; k <= kTailOctaves; ++k) tb.push_back(std::ldexp(1.0, -k));
    for (double k : model_->kinks()) {
      if (k > 0.0 && k < 0.5) rb.push_back(k);
      else if (k > 0.5 && k < 1.0) tb.push_back(1.0 - k);
    }
    std::sort(rb.begin(), rb.end());
    rb.erase(std::unique(rb.begin(), rb.end()), rb.end());
    std::sort(tb.rbegin(), tb.rend());
    tb.erase(std::unique(tb.begin(), tb.end()), tb.end());
    std::vector<std::pair<double, double>> pieces;
    for (std::size_t i = 0; i + 1 < rb.size(); ++i) {
      pieces.emplace_back(rb[i], rb[i + 1]);
      R->piece_tlo.push_back(1.0 - rb[i + 1]);
    }
    const int n_r = static_cast<int>(pieces.size());
    for (std::size_t i = 0; i + 1 < tb.size(); ++i) {
      pieces.emplace_back(tb[i + 1], tb[i]);
      R->piece_tlo.push_back(tb[i + 1]);
    }
    R->r_head = rb[1];
    build_level(*model_, pieces, n_r, kFineOrder, R->fine);
    build_level(*model_, pieces, n_r, kCoarseOrder, R->coarse);
    for (double t : R->piece_tlo) R->tail_lo.push_back(tail_gap(t));
    if (model_->has_closed_tail()) {
      R->tail_fine.resize(R->fine.t.size());
      for (int i = 0; i < R->fine.t.size(); ++i) R->tail_fine[i] = tail_gap(R->fine.t[i]);
    }
    cache_->rule = std::move(R);
  });
  return *cache_->rule;
}

double RadialWeight::moment_direct(double x) const {
  if (!(x >= 0.0)) throw DomainError("moment needs x >= 0");
  const RadialRule& R = rule();
  const RuleLevel& L = R.fine;
  const int last = R.last_piece(std::ldexp(1.0, -54) / (x + 1.0));
  double s = 0.0;
  for (int i = L.piece_end[last] - 1; i >= 0; --i) {
    const double e = x * L.logr[i];
    if (e < -750.0) break;
    s += std::exp(e) * L.w[i];
  }
  return s + R.tail_lo[last];
}

double RadialWeight::moment_by_parts(double x) const {
  if (!(x >= 0.0)) throw DomainError("moment needs x >= 0");
  if (x == 0.0) return tail0();
  const RadialRule& R = rule();
  const RuleLevel& L = R.fine;
  const int last = R.last_piece(std::ldexp(1.0, -54) / (x + 1.0));
  const int head_end = L.piece_end[0];
  double s = 0.0;
  for (int i = L.piece_end[last] - 1; i >= head_end; --i) {
    const double e = (x - 1.0) * L.logr[i];
    if (e < -750.0) break;
    const double T = R.tail_fine.size() ? R.tail_fine[i] : tail_gap(L.t[i]);
    s += std::exp(e) * T * L.len_w[i];
  }
  // head piece [0, r_head]: x r^{x-1} T(r) ~ x r^{x-1} T(0)
  return x * s + tail0() * std::pow(R.r_head, x);
}

double RadialWeight::moment_uncached(double x) const {
  if (auto c = model_->moment_closed(x)) return *c;
  if (model_->has_closed_tail()) return moment_by_parts(x);
  return moment_direct(x);
}

double RadialWeight::moment(double x) const {
  if (!(x >= 0.0)) throw DomainError("moment needs x >= 0");
  {
    std::shared_lock lock(cache_->mu);
    auto it = cache_->moments.find(x);
    if (it != cache_->moments.end()) return it->second;
  }
  const double v = x == 0.0 ? tail0() : moment_uncached(x);
  std::unique_lock lock(cache_->mu);
  cache_->moments.emplace(x, v);
  return v;
}

Eigen::VectorXd RadialWeight::moments(const Eigen::Ref<const Eigen::VectorXd>& xs) const {
  Eigen::VectorXd out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out[i] = moment(xs[i]);
  return out;
}

double tail_power_integral(const RadialWeight& w, double m, double gamma, double tau) {
  if (tau >= 1.0) return 0.0;
  if (!(tau > 0.0)) return kInf;
  if (auto c = w.model().tail_power_closed(m, gamma, tau)) return *c;
  QuadOptions opt;
  opt.rel_tol = 1e-12;
  opt.max_intervals = 20000;
  auto f = [&](double t) { return 1.0 / (std::pow(t, m) * std::pow(w.tail_gap(t), gamma)); };
  return integrate_partition(f, octave_breaks(tau, 1.0, 400), opt).value;
}

double partial_moment(const RadialWeight& w, double x, double a, double b) {
  if (!(0.0 <= a && a <= b && b <= 1.0)) throw DomainError("partial moment needs 0 <= a <= b <= 1");
  if (!(x == 0.0 || x >= 1.0)) throw DomainError("partial moment exponent must be 0 or >= 1");
  const double ta = w.tail(a), tb = w.tail(b);
  if (x == 0.0) return ta - tb;
  if (a == b) return 0.0;
  // integration by parts: a^x T(a) - b^x T(b) + x integral of r^{x-1} T over [a, b]
  const double lo = 1.0 - b, hi = 1.0 - a;
  std::vector<double> br = lo > 0 ? octave_breaks(lo, hi, 60) : octave_breaks(0.0, hi, 80);
  QuadOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-300;
  const double I =
      integrate_partition([&](double t) { return std::pow(1.0 - t, x - 1.0) * w.tail_gap(t); },
                          br, opt)
          .value;
  return std::pow(a, x) * ta - std::pow(b, x) * tb + x * I;
}

double weight_mass(const RadialWeight& w, double a, double b, bool with_r) {
  return partial_moment(w, with_r ? 1.0 : 0.0, a, b);
}

double conjugate_exponent(double q) {
  if (!(q > 0.0)) throw DomainError("conjugate exponent needs q > 0");
  if (q <= 1.0) return kInf;
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

}  // namespace mixnorm
