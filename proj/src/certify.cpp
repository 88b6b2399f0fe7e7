#include <algorithm>
#include <cmath>
#include <limits>

#include "mixnorm/errors.hpp"
#include "mixnorm/weights.hpp"

namespace mixnorm {

namespace {


double safe_ratio(double a, double b) {
  if (b == 0.0) return a == 0.0 ? std::numeric_limits<double>::quiet_NaN() : kInf;
  return a / b;
}

bool stable(double coarse, double full, double tol) {
  if (!std::isfinite(coarse) || !std::isfinite(full)) return false;
  return std::abs(full - coarse) <= tol * std::abs(full);
}

// sup (or inf) of T(t) / T(t / K) over the grid and over its first two thirds
ClassReport scan(const RadialWeight& w, double K, const std::vector<double>& grid, bool sup) {
  if (grid.empty()) throw DomainError("certification grid is empty");
  ClassReport rep;
  rep.witness_grid = grid;
  const std::size_t n_coarse = (2 * grid.size() + 2) / 3;
  double best = sup ? -kInf : kInf, coarse = best;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("certification grid must lie in [0, 1)");
    const double t = 1.0 - r;
    double q = safe_ratio(w.tail_gap(t), w.tail_gap(t / K));
    if (std::isnan(q)) q = kInf;
    if (sup ? q > best : q < best) {
      best = q;
      rep.argbest = r;
    }
    if (i + 1 == n_coarse) coarse = best;
  }
  rep.best_constant = best;
  rep.coarse_constant = coarse;
  rep.K = K;
  return rep;
}

}  // namespace

std::string to_string(DoublingClass c) { return c == DoublingClass::Dhat ? "Dhat" : "Dcheck"; }

std::string to_string(DoublingDiagnostic i) {
  switch (i) {
    case DoublingDiagnostic::tail_power_decay: return "tail_power_decay";
    case DoublingDiagnostic::tail_vs_moment: return "tail_vs_moment";
    case DoublingDiagnostic::moment_doubling: return "moment_doubling";
    case DoublingDiagnostic::moment_power_decay: return "moment_power_decay";
    case DoublingDiagnostic::beta_moment: return "beta_moment";
  }
  return "?";
}

std::vector<double> certification_grid(int j_max) {
  std::vector<double> g;
  for (int j = 0; j <= j_max; ++j) g.push_back(1.0 - std::exp2(-j / 4.0));
  return g;
}

ClassReport certify_upper_doubling(const RadialWeight& w, const std::vector<double>& grid) {
  ClassReport rep = scan(w, 2.0, grid, true);
  rep.class_name = DoublingClass::Dhat;
  rep.K = 0.0;
  rep.certified = stable(rep.coarse_constant, rep.best_constant, 0.01);
  return rep;
}

ClassReport certify_lower_doubling(const RadialWeight& w, double K,
                                   const std::vector<double>& grid) {
  if (!(K > 1.0)) throw DomainError("lower doubling needs K > 1");
  ClassReport rep = scan(w, K, grid, false);
  rep.class_name = DoublingClass::Dcheck;
  rep.certified = rep.best_constant > 1.0 && stable(rep.coarse_constant, rep.best_constant, 0.01);
  return rep;
}

ClassReport classify_lower_doubling(const RadialWeight& w, const std::vector<double>& grid) {
  ClassReport last;
  for (double K = 2.0; K <= 64.0; K *= 2.0) {
    last = certify_lower_doubling(w, K, grid);
    if (last.certified) return last;
  }
  return last;
}

double empirical_alpha0(const RadialWeight& w, double C, const std::vector<double>& grid) {
  std::vector<double> lg, lt;
  for (double r : grid) {
    const double t = 1.0 - r, T = w.tail_gap(t);
    if (!(T > 0.0)) return kInf;
    lg.push_back(std::log(t));
    lt.push_back(std::log(T));
  }
  // least alpha with log T(s) - log T(t) <= log C + alpha log((1-s)/(1-t))
  double a = 0.0;
  for (std::size_t i = 0; i < lg.size(); ++i)
    for (std::size_t j = i + 1; j < lg.size(); ++j) {
      const double la = lg[i] - lg[j];
      if (la > 0.0) a = std::max(a, (lt[i] - lt[j] - std::log(C)) / la);
    }
  return a;
}

namespace {

std::vector<RatioSample> pair_samples(const std::vector<double>& gaps,
                                      const std::vector<double>& vals, double expo) {
  std::vector<RatioSample> out;
  for (std::size_t i = 0; i < gaps.size(); ++i)
    for (std::size_t j = i + 1; j < gaps.size(); ++j)
      out.push_back({{gaps[i], gaps[j]}, vals[i] / vals[j], std::pow(gaps[i] / gaps[j], expo)});
  return out;
}

}  // namespace

std::vector<DiagnosticReport> doubling_diagnostics(const RadialWeight& w,
                                             const std::vector<DoublingDiagnostic>& items,
                                             const DiagnosticOptions& opt) {
  std::vector<DiagnosticReport> out;
  const SweepGrid xg = log_sweep_grid(1.0, opt.x_max_base, opt.x_max_refined);
  auto xs = [](const std::vector<std::vector<double>>& g) {
    std::vector<double> v;
    for (const auto& c : g) v.push_back(c[0]);
    return v;
  };
  const std::vector<double> xb = xs(xg.base), xr = xs(xg.refined);
  SweepOptions one;
  one.one_sided = true;

  for (DoublingDiagnostic item : items) {
    DiagnosticReport rep{item, {}, std::nullopt};
    switch (item) {
      case DoublingDiagnostic::tail_power_decay: {
        const auto full = certification_grid(120), coarse = certification_grid(40);
        const double a0 = empirical_alpha0(w, opt.constant, full);
        auto gaps_of = [&](const std::vector<double>& g, std::vector<double>& gaps,
                           std::vector<double>& T) {
          for (double r : g) {
            gaps.push_back(1.0 - r);
            T.push_back(w.tail_gap(1.0 - r));
          }
        };
        std::vector<double> gb, tb, gr, tr;
        gaps_of(coarse, gb, tb);
        gaps_of(full, gr, tr);
        rep.ratio = summarize_ratios(pair_samples(gb, tb, a0), pair_samples(gr, tr, a0), one);
        rep.exponent = a0;
        break;
      }
      case DoublingDiagnostic::tail_vs_moment:
        rep.ratio = ratio_sweep([&](const std::vector<double>& c) { return w.tail_gap(1.0 / c[0]); },
                                [&](const std::vector<double>& c) { return w.moment(c[0]); }, xg);
        break;
      case DoublingDiagnostic::moment_doubling:
        rep.ratio = ratio_sweep([&](const std::vector<double>& c) { return w.moment(c[0]); },
                                [&](const std::vector<double>& c) { return w.moment(2 * c[0]); },
                                xg, one);
        break;
      case DoublingDiagnostic::moment_power_decay: {
        auto mom = [&](const std::vector<double>& x) {
          std::vector<double> m;
          for (double v : x) m.push_back(w.moment(v));
          return m;
        };
        const std::vector<double> mr = mom(xr), mb = mom(xb);
        double eta = 0.0;
        for (std::size_t i = 0; i < xr.size(); ++i)
          for (std::size_t j = i + 1; j < xr.size(); ++j)
            eta = std::max(eta, (std::log(mr[i] / mr[j]) - std::log(opt.constant)) /
                                    std::log(xr[j] / xr[i]));
        // pairs x <= y: omega_x / omega_y against (y/x)^eta
        auto samples = [&](const std::vector<double>& x, const std::vector<double>& m) {
          std::vector<RatioSample> s;
          for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = i + 1; j < x.size(); ++j)
              s.push_back({{x[i], x[j]}, m[i] / m[j], std::pow(x[j] / x[i], eta)});
          return s;
        };
        rep.ratio = summarize_ratios(samples(xb, mb), samples(xr, mr), one);
        rep.exponent = eta;
        break;
      }
      case DoublingDiagnostic::beta_moment: {
        const RadialWeight wb = beta_modulated(w, opt.beta);
        rep.ratio = ratio_sweep(
            [&](const std::vector<double>& c) { return std::pow(c[0], opt.beta) * wb.moment(c[0]); },
            [&](const std::vector<double>& c) { return w.moment(c[0]); }, xg, one);
        break;
      }
    }
    out.push_back(std::move(rep));
  }
  return out;
}

RatioReport tail_integral_diagnostic(const RadialWeight& w, double gamma, const SweepGrid& grid) {
  if (!(gamma > 0.0)) throw DomainError("tail integral diagnostic needs gamma > 0");
  SweepOptions one;
  one.one_sided = true;
  return ratio_sweep(
      [&](const std::vector<double>& c) {
        const double t = 1.0 - c[0];
        return tail_power_integral(w, 1.0, gamma, t) * std::pow(w.tail_gap(t), gamma);
      },
      [](const std::vector<double>&) { return 1.0; }, grid, one);
}

}  // namespace mixnorm
