#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mixnorm/diskfn.hpp"
#include "mixnorm/weights.hpp"

namespace mixnorm {

// Smooth cutoff: 1 on (-inf, 1], 0 on [k, inf), C-infinity glue in between.
struct CutoffSpec {
  int k = 2;

  double psi(double t) const;
  // clamped ramp, 0 for x <= 0 and 1 for x >= 1
  double ramp(double x) const { return 1.0 - psi(1.0 + (k - 1) * x); }
};

struct BlockSchedule {
  RadialWeight weight = RadialWeight::standard(0.0);
  double K = 2.0;
  std::vector<double> r_seq;     // r_n
  std::vector<double> gap_seq;   // 1 - r_n, kept separately for precision
  std::vector<std::int64_t> M_seq;
  double lacunary_ratio = 0.0;  // min M_{n+1}/M_n over n >= 1
  bool truncated = false;       // stopped early because 1 - r_n fell below 1e-12

  int n_max() const { return static_cast<int>(M_seq.size()) - 1; }
};

double choose_K(const RadialWeight& w, double margin = 0.01);

BlockSchedule build_schedule(const RadialWeight& w, double K, int n_max = 16);

// (min ratio > 1 + 1e-9, min ratio)
std::pair<bool, double> is_lacunary(const std::vector<std::int64_t>& seq);

AnalyticPoly build_vnk(const CutoffSpec& cut, int n);

// Windows P_n = R_n - R_{n+1} where R_n ramps from 0 at M_{n-1} to 1 at M_{n+N-1}
// (R_0 = 1), so P_n lives on [M_{n-1}, M_{n+N}) and the windows telescope to 1.
class BlockBasis {
 public:
  BlockBasis(BlockSchedule schedule, int N, CutoffSpec cut = {});

  const BlockSchedule& schedule() const { return sched_; }
  int N() const { return N_; }
  const CutoffSpec& cutoff() const { return cut_; }
  double K() const { return sched_.K; }

  int n_blocks() const { return n_blocks_; }
  // every frequency j <= coverage() is fully partitioned
  std::int64_t coverage() const;
  std::int64_t M(int n) const;  // M_{-1} = 0

  // nonzero range [lo, hi) of window n
  std::pair<std::int64_t, std::int64_t> support(int n) const;
  double coeff(int n, std::int64_t j) const;
  AnalyticPoly window(int n) const;

 private:
  double rise(int n, std::int64_t j) const;  // R_n(j)
  BlockSchedule sched_;
  int N_;
  CutoffSpec cut_;
  int n_blocks_;
};

AnalyticPoly block_project(const BlockBasis& basis, int n, const AnalyticPoly& f);

struct InnerSpec {
  InnerSpace X = InnerSpace::Hp;
  double p = 2.0;
};

// ||P_n * f||_X for every window meeting the spectrum of f
std::vector<double> block_norms(const AnalyticPoly& f, const BlockBasis& basis,
                                const InnerSpec& X);

double decomposition_norm(const AnalyticPoly& f, const BlockBasis& basis, const InnerSpec& X,
                          double q);
double lqs_norm(const AnalyticPoly& f, const BlockBasis& basis, double s, double q,
                const InnerSpec& X);

}  // namespace mixnorm
