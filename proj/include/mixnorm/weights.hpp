#pragma once

#include <Eigen/Core>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mixnorm/report.hpp"

namespace mixnorm {

enum class WeightFamily {
  standard,
  logarithmic,
  exponential,
  tabulated,
  beta_modulated,
  power_transform
};
enum class TailMode { closed_form, quadrature };

std::string to_string(WeightFamily f);

// Family behaviour, written in the gap variable t = 1 - r so that values
// near the boundary keep full relative precision.
class WeightModel {
 public:
  virtual ~WeightModel() = default;
  virtual WeightFamily family() const = 0;
  virtual std::string spec() const = 0;
  virtual std::vector<double> params() const = 0;
  virtual double density_gap(double t) const = 0;
  virtual bool has_closed_tail() const { return false; }
  virtual double tail_gap_closed(double t) const;
  virtual std::optional<double> moment_closed(double) const { return std::nullopt; }
  // integral over [tau, 1] of dt / (t^m T(t)^gamma)
  virtual std::optional<double> tail_power_closed(double, double, double) const {
    return std::nullopt;
  }
  // interior points (in r) where the density is not smooth
  virtual std::vector<double> kinks() const { return {}; }
};

// Composite Gauss rule for integrals against omega(r) dr. Pieces are graded in r
// toward 0 and in t toward r = 1; nodes are ordered by increasing r.
struct RuleLevel {
  Eigen::VectorXd r, t, logr, w, len_w;  // w = len_w * density
  std::vector<int> piece_end;            // one past the last node of each piece
};

struct RadialRule {
  RuleLevel fine, coarse;
  std::vector<double> piece_tlo;  // lower gap bound of each piece
  std::vector<double> tail_lo;    // tail at piece_tlo
  Eigen::VectorXd tail_fine;      // tail at fine nodes (empty without closed tail)
  double r_head = 0.0;            // first piece is [0, r_head]

  // last piece whose lower gap bound is >= tau
  int last_piece(double tau) const;
};

class RadialWeight {
 public:
  explicit RadialWeight(std::shared_ptr<const WeightModel> model);

  static RadialWeight standard(double alpha);
  static RadialWeight logarithmic(double kappa);
  static RadialWeight exponential(double c);
  static RadialWeight tabulated(std::vector<double> r, std::vector<double> omega);

  WeightFamily family() const { return model_->family(); }
  TailMode tail_mode() const;
  std::string spec() const { return model_->spec(); }
  std::vector<double> params() const { return model_->params(); }
  const WeightModel& model() const { return *model_; }
  std::shared_ptr<const WeightModel> model_ptr() const { return model_; }

  double density(double r) const;
  double tail(double r) const;
  double density_gap(double t) const { return model_->density_gap(t); }
  double tail_gap(double t) const;
  double tail0() const;

  double moment(double x) const;
  Eigen::VectorXd moments(const Eigen::Ref<const Eigen::VectorXd>& xs) const;
  // independent routes, exposed for consistency checks
  double moment_by_parts(double x) const;
  double moment_direct(double x) const;

  const RadialRule& rule() const;

 private:
  struct Cache;
  double moment_uncached(double x) const;
  std::shared_ptr<const WeightModel> model_;
  std::shared_ptr<Cache> cache_;
};

inline double density(const RadialWeight& w, double r) { return w.density(r); }
inline double tail(const RadialWeight& w, double r) { return w.tail(r); }
inline double moment(const RadialWeight& w, double x) { return w.moment(x); }

RadialWeight beta_modulated(const RadialWeight& w, double beta);
RadialWeight power_transform(const RadialWeight& w, double alpha);

// Integral over [tau, 1] of dt / (t^m T(t)^gamma); the gap form of
// integral over [0, 1 - tau] of ds / ((1 - s)^m tail(s)^gamma).
double tail_power_integral(const RadialWeight& w, double m, double gamma, double tau);

// Integral of omega (with_r: r omega) over [a, b].
double weight_mass(const RadialWeight& w, double a, double b, bool with_r);
// integral of r^x omega over [a, b], x = 0 or x >= 1
double partial_moment(const RadialWeight& w, double x, double a, double b);

struct RuleAudit {
  double value = 0.0;
  double error = 0.0;
};

// Integral of g(r, t) omega(r) dr with t = 1 - r; the gap range below tau_cut is
// lumped into g(1, 0) times the tail there.
template <class G>
double rule_integrate(const RadialWeight& w, G&& g, double tau_cut, bool coarse = false) {
  const RadialRule& R = w.rule();
  const RuleLevel& L = coarse ? R.coarse : R.fine;
  const int last = R.last_piece(tau_cut);
  const int end = L.piece_end[last];
  double s = 0.0;
  for (int i = 0; i < end; ++i) s += g(L.r[i], L.t[i]) * L.w[i];
  return s + g(1.0, 0.0) * R.tail_lo[last];
}

template <class G>
RuleAudit rule_integrate_audit(const RadialWeight& w, G&& g, double tau_cut) {
  const double f = rule_integrate(w, g, tau_cut, false);
  const double c = rule_integrate(w, g, tau_cut, true);
  return {f, std::abs(f - c)};
}

double conjugate_exponent(double q);

// ---- doubling classes ----

enum class DoublingClass { Dhat, Dcheck };
std::string to_string(DoublingClass c);

struct ClassReport {
  DoublingClass class_name = DoublingClass::Dhat;
  bool certified = false;
  double best_constant = 0.0;
  double coarse_constant = 0.0;
  std::vector<double> witness_grid;
  double K = 0.0;  // lower doubling only
  double argbest = 0.0;
};

// r_j = 1 - 2^{-j/4}, j = 0..j_max
std::vector<double> certification_grid(int j_max = 120);

ClassReport certify_upper_doubling(const RadialWeight& w,
                                   const std::vector<double>& grid = certification_grid());
ClassReport certify_lower_doubling(const RadialWeight& w, double K,
                                   const std::vector<double>& grid = certification_grid());
// tries K = 2, 4, ..., 64 and returns the first certified report (or the last tried)
ClassReport classify_lower_doubling(const RadialWeight& w,
                                    const std::vector<double>& grid = certification_grid());

// tail power decay, tail vs moments, moment doubling, moment power decay, beta-modulated moments
enum class DoublingDiagnostic {
  tail_power_decay,
  tail_vs_moment,
  moment_doubling,
  moment_power_decay,
  beta_moment
};
std::string to_string(DoublingDiagnostic i);

struct DiagnosticReport {
  DoublingDiagnostic item;
  RatioReport ratio;
  std::optional<double> exponent;  // alpha_0 for tail power decay, eta for moment power decay
};

struct DiagnosticOptions {
  double x_max_base = 1e4;
  double x_max_refined = 1e12;
  double beta = 1.0;
  double constant = 2.0;
};

std::vector<DiagnosticReport> doubling_diagnostics(const RadialWeight& w,
                                             const std::vector<DoublingDiagnostic>& items,
                                             const DiagnosticOptions& opt = {});

// least alpha with tail(s)/tail(t) <= C ((1-s)/(1-t))^alpha for s <= t on the grid
double empirical_alpha0(const RadialWeight& w, double C,
                        const std::vector<double>& grid = certification_grid());

RatioReport tail_integral_diagnostic(const RadialWeight& w, double gamma,
                              const SweepGrid& grid = radial_sweep_grid());

}  // namespace mixnorm
