#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mixnorm/blocks.hpp"
#include "mixnorm/diskfn.hpp"
#include "mixnorm/report.hpp"
#include "mixnorm/weights.hpp"

namespace mixnorm {

inline constexpr std::uint64_t kFamilySeed = 0x5EED;

// Random polynomials, monomials at block frequencies, lacunary sums and
// dilated kernel sections, all of degree <= cap.
struct TestFamily {
  std::uint64_t seed = kFamilySeed;
  std::int64_t cap = 0;
  std::vector<AnalyticPoly> members;
  std::vector<std::string> kinds;
};

// default cap: min(16384, coverage, M_10)
std::int64_t default_family_cap(const BlockBasis& basis);

TestFamily make_test_family(const BlockBasis& basis, std::uint64_t seed = kFamilySeed,
                            std::int64_t cap = -1, int n_random = 40, int n_monomials = 10,
                            int n_lacunary = 5, int n_kernels = 5);

using PolyFn = std::function<double(const AnalyticPoly&)>;

// Ratio sweep over two families; the refined family is the one with the larger cap.
// Coordinates are {member index, degree}; zero denominators are excluded.
RatioReport family_ratio(const PolyFn& lhs, const PolyFn& rhs, const TestFamily& base,
                         const TestFamily& refined, const SweepOptions& opt = {});

// The base pass of a family sweep: every member truncated to degree cap / 4.
TestFamily coarse_family(const TestFamily& family);

// sum_k f^(k) conj(g^(k)) omega_{2k+1}
cdouble pairing_A2(const RadialWeight& w, const AnalyticPoly& f, const AnalyticPoly& g);

cdouble pairing_small_p(const RadialWeight& w, const AnalyticPoly& f, const AnalyticPoly& g,
                        double p, double q);

struct HolderResult {
  double lhs = 0.0;              // |<f, g>|
  double bound = 0.0;            // ||g||_{p,q} ||f||_{p',q'}, both with r omega dr
  double bound_without_r = 0.0;  // same with omega dr, recorded only
};

HolderResult holder_pairing_check(const RadialWeight& w, double p, double q,
                                  const AnalyticPoly& f, const AnalyticPoly& g);

struct BlockMultiplierReport {
  RatioReport vs_moment;  // ||I^mu(P_n g)||_X / (mu_{M_n} ||P_n g||_X)
  RatioReport vs_power;   // ||I^mu(P_n g)||_X / (K^{-alpha n} ||P_n g||_X)
  int blocks_used = 0;
  int blocks_skipped = 0;
};

// base pass: all populated blocks but the deepest one; refined pass: all blocks n <= n_max
BlockMultiplierReport block_multiplier_check(const RadialWeight& w, double alpha, const BlockBasis& basis,
                          const InnerSpec& X, const TestFamily& family, int n_max = 12);

// mixed_norm (with r) over space_norm_Xq (without r, X = H^p)
RatioReport convention_equivalence_check(const RadialWeight& w, double p, double q,
                                         const BlockBasis& basis, const TestFamily& family);

// decomposition_norm^q / space_norm_Xq^q (plain ratio for q = inf), X(q, omega) without r
RatioReport decomposition_equivalence_check(const RadialWeight& w, const BlockBasis& basis,
                                            const InnerSpec& X, double q,
                                            const TestFamily& family);

}  // namespace mixnorm
