#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace mixnorm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Verdict { bounded, unbounded_trend, unconverged };

std::string to_string(Verdict v);

struct RatioSample {
  std::vector<double> coord;
  double lhs = 0.0;
  double rhs = 0.0;
};

// Numerical form of "lhs is comparable to rhs": extreme ratios on a base pass and
// on a refined pass pushed toward the singular boundary.
struct RatioReport {
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  std::vector<double> argmin;
  std::vector<double> argmax;
  int n_points = 0;
  int n_excluded = 0;
  double base_min = 0.0;
  double base_max = 0.0;
  double stability = 0.0;
  double growth = 1.0;
  bool one_sided = false;
  Verdict verdict = Verdict::unconverged;
  std::vector<RatioSample> samples;

  double spread() const { return ratio_max / ratio_min; }
};

struct SweepOptions {
  double stability_tol = 0.10;
  double trend_factor = 2.0;
  // upper-bound-only comparisons ignore the behavior of the minimum
  bool one_sided = false;
};

RatioReport summarize_ratios(const std::vector<RatioSample>& base,
                             const std::vector<RatioSample>& refined,
                             const SweepOptions& opt = {});

struct SweepGrid {
  std::vector<std::vector<double>> base;
  std::vector<std::vector<double>> refined;
};

// radii r = 1 - 2^{-j/4} down to gap 2^{-base_octaves}; refined pass uses
// 2^{-j/8} down to 2^{-refined_octaves}
SweepGrid radial_sweep_grid(int base_octaves = 10, int refined_octaves = 30);

// log-spaced x in [lo, hi], refinement extends hi and doubles density
SweepGrid log_sweep_grid(double lo, double hi_base, double hi_refined, int per_decade = 4);

using GridFn = std::function<double(const std::vector<double>&)>;

RatioReport ratio_sweep(const GridFn& lhs, const GridFn& rhs, const SweepGrid& grid,
                        const SweepOptions& opt = {});

}  // namespace mixnorm
