#include "mixnorm/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mixnorm {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::bounded: return "bounded";
    case Verdict::unbounded_trend: return "unbounded-trend";
    case Verdict::unconverged: return "unconverged";
  }
  return "unknown";
}

namespace {

struct Extremes {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<double> arglo, arghi;
  int used = 0, excluded = 0;
};

Extremes scan(const std::vector<RatioSample>& s) {
  Extremes e;
  for (const auto& p : s) {
    if (!(p.rhs != 0.0) || !std::isfinite(p.rhs) || std::isnan(p.lhs)) {
      ++e.excluded;
      continue;
    }
    const double q = p.lhs / p.rhs;
    ++e.used;
    if (q < e.lo) {
      e.lo = q;
      e.arglo = p.coord;
    }
    if (q > e.hi) {
      e.hi = q;
      e.arghi = p.coord;
    }
  }
  return e;
}

double rel_change(double a, double b) {
  if (a == b) return 0.0;
  if (!std::isfinite(a) || !std::isfinite(b)) return std::numeric_limits<double>::infinity();
  return std::abs(b - a) / std::max(std::abs(a), std::abs(b));
}

}  // namespace

RatioReport summarize_ratios(const std::vector<RatioSample>& base,
                             const std::vector<RatioSample>& refined,
                             const SweepOptions& opt) {
  const Extremes b = scan(base), r = scan(refined);
  RatioReport rep;
  rep.one_sided = opt.one_sided;
  rep.ratio_min = r.lo;
  rep.ratio_max = r.hi;
  rep.argmin = r.arglo;
  rep.argmax = r.arghi;
  rep.base_min = b.lo;
  rep.base_max = b.hi;
  rep.n_points = r.used;
  rep.n_excluded = r.excluded;
  rep.samples = refined;
  if (r.used == 0 || b.used == 0) {
    rep.verdict = Verdict::unconverged;
    rep.stability = std::numeric_limits<double>::infinity();
    return rep;
  }
  const double up = r.hi / b.hi;
  const double down = r.lo > 0 ? b.lo / r.lo : std::numeric_limits<double>::infinity();
  rep.growth = opt.one_sided ? up : std::max(up, down);
  rep.stability = opt.one_sided ? rel_change(b.hi, r.hi)
                                : std::max(rel_change(b.hi, r.hi), rel_change(b.lo, r.lo));
  if (!std::isfinite(r.hi) || rep.growth >= opt.trend_factor)
    rep.verdict = Verdict::unbounded_trend;
  else if (rep.stability <= opt.stability_tol)
    rep.verdict = Verdict::bounded;
  else
    rep.verdict = Verdict::unconverged;
  return rep;
}

SweepGrid radial_sweep_grid(int base_octaves, int refined_octaves) {
  SweepGrid g;
  for (int j = 0; j <= 4 * base_octaves; ++j) g.base.push_back({1.0 - std::exp2(-j / 4.0)});
  for (int j = 0; j <= 8 * refined_octaves; ++j)
    g.refined.push_back({1.0 - std::exp2(-j / 8.0)});
  return g;
}

SweepGrid log_sweep_grid(double lo, double hi_base, double hi_refined, int per_decade) {
  SweepGrid g;
  auto fill = [&](double hi, int density, std::vector<std::vector<double>>& out) {
    const int n = static_cast<int>(std::ceil(std::log10(hi / lo) * density - 1e-9));
    for (int k = 0; k <= n; ++k) out.push_back({lo * std::pow(hi / lo, double(k) / n)});
  };
  fill(hi_base, per_decade, g.base);
  fill(hi_refined, 2 * per_decade, g.refined);
  return g;
}

RatioReport ratio_sweep(const GridFn& lhs, const GridFn& rhs, const SweepGrid& grid,
                        const SweepOptions& opt) {
  auto run = [&](const std::vector<std::vector<double>>& pts) {
    std::vector<RatioSample> out;
    out.reserve(pts.size());
    for (const auto& c : pts) out.push_back({c, lhs(c), rhs(c)});
    return out;
  };
  return summarize_ratios(run(grid.base), run(grid.refined), opt);
}

}  // namespace mixnorm
