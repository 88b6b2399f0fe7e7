#include "mixnorm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "mixnorm/errors.hpp"
#include "mixnorm/parallel.hpp"

namespace mixnorm {

namespace {

Eigen::VectorXd odd_moments(const RadialWeight& w, int deg) {
  Eigen::VectorXd xs(deg + 1);
  for (int k = 0; k <= deg; ++k) xs[k] = 2.0 * k + 1.0;
  return w.moments(xs);
}

cdouble weighted_pairing(const AnalyticPoly& f, const AnalyticPoly& g, const Eigen::VectorXd& m) {
  const int top = std::min(f.degree(), g.degree());
  cdouble s = 0.0;
  for (int k = 0; k <= top; ++k) s += f.coeff(k) * std::conj(g.coeff(k)) * m[k];
  return s;
}

}  // namespace

// ---- test families ----

std::int64_t default_family_cap(const BlockBasis& basis) {
  std::int64_t cap = std::min<std::int64_t>(16384, basis.coverage());
  if (basis.schedule().n_max() >= 10) cap = std::min(cap, basis.M(10));
  return cap;
}

TestFamily make_test_family(const BlockBasis& basis, std::uint64_t seed, std::int64_t cap,
                            int n_random, int n_monomials, int n_lacunary, int n_kernels) {
  TestFamily fam;
  fam.seed = seed;
  fam.cap = cap < 0 ? default_family_cap(basis) : std::min(cap, basis.coverage());
  if (fam.cap < 1) throw DomainError("test family needs a positive degree cap");
  const int cap_i = static_cast<int>(fam.cap);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;

  // degrees log-uniform in [1, cap] so every block scale is visited
  for (int i = 0; i < n_random; ++i) {
    const int deg = std::max(1, static_cast<int>(std::pow(fam.cap, unif(rng))));
    Eigen::VectorXcd c(deg + 1);
    for (auto& v : c) v = cdouble(gauss(rng), gauss(rng));
    fam.members.emplace_back(std::move(c));
    fam.kinds.push_back("random");
  }

  std::vector<std::int64_t> block_freqs;
  for (int n = 0; n <= basis.schedule().n_max(); ++n)
    if (basis.M(n) <= fam.cap) block_freqs.push_back(basis.M(n));
  std::set<std::int64_t> freqs(block_freqs.begin(), block_freqs.end());
  // short schedules are padded with geometric midpoints
  for (std::size_t n = 0; freqs.size() < static_cast<std::size_t>(n_monomials) && n < block_freqs.size(); ++n) {
    const std::int64_t hi = n + 1 < block_freqs.size() ? block_freqs[n + 1] : fam.cap;
    const auto mid = static_cast<std::int64_t>(std::sqrt(double(block_freqs[n]) * double(hi)));
    if (mid <= fam.cap) freqs.insert(mid);
  }
  int taken = 0;
  for (std::int64_t f : freqs) {
    if (taken++ == n_monomials) break;
    fam.members.push_back(AnalyticPoly::monomial(static_cast<int>(f)));
    fam.kinds.push_back("monomial");
  }

  for (int i = 0; i < n_lacunary; ++i) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(block_freqs.back() + 1);
    for (std::int64_t f : block_freqs) c[f] = cdouble(gauss(rng), gauss(rng));
    fam.members.emplace_back(std::move(c));
    fam.kinds.push_back("lacunary");
  }

  const RadialWeight& w = basis.schedule().weight;
  const Eigen::VectorXd m = odd_moments(w, cap_i);
  for (int i = 0; i < n_kernels; ++i) {
    const double rho = 1.0 - std::exp2(-2.0 * (i + 1));
    Eigen::VectorXcd c(cap_i + 1);
    double rk = 1.0;
    for (int k = 0; k <= cap_i; ++k, rk *= rho) c[k] = 0.5 / m[k] * rk;
    fam.members.emplace_back(std::move(c));
    fam.kinds.push_back("kernel");
  }
  return fam;
}

TestFamily coarse_family(const TestFamily& family) {
  TestFamily out = family;
  out.cap = std::max<std::int64_t>(1, family.cap / 4);
  for (auto& f : out.members)
    if (f.degree() > out.cap) f = AnalyticPoly(Eigen::VectorXcd(f.coeffs().head(out.cap + 1)));
  return out;
}

RatioReport family_ratio(const PolyFn& lhs, const PolyFn& rhs, const TestFamily& base,
                         const TestFamily& refined, const SweepOptions& opt) {
  auto run = [&](const TestFamily& fam) {
    const int n = static_cast<int>(fam.members.size());
    std::vector<RatioSample> out(n);
    parallel_for(n, [&](int i) {
      const auto& f = fam.members[i];
      out[i] = {{double(i), double(f.degree())}, lhs(f), rhs(f)};
    });
    return out;
  };
  return summarize_ratios(run(base), run(refined), opt);
}

// ---- pairings ----

cdouble pairing_A2(const RadialWeight& w, const AnalyticPoly& f, const AnalyticPoly& g) {
  return weighted_pairing(f, g, odd_moments(w, std::min(f.degree(), g.degree())));
}

cdouble pairing_small_p(const RadialWeight& w, const AnalyticPoly& f, const AnalyticPoly& g,
                        double p, double q) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("small-p pairing needs p in (0, 1)");
  if (!(q > 0.0)) throw DomainError("pairing needs q > 0");
  const int top = std::min(f.degree(), g.degree());
  const RadialWeight nu = RadialWeight::standard(1.0 / p - 2.0);
  const RadialWeight mu = q <= 1.0 ? power_transform(w, 1.0 + 1.0 / q) : w;
  const Eigen::VectorXd m = odd_moments(mu, top).cwiseProduct(odd_moments(nu, top));
  return weighted_pairing(f, g, m);
}

HolderResult holder_pairing_check(const RadialWeight& w, double p, double q,
                                  const AnalyticPoly& f, const AnalyticPoly& g) {
  if (!(p > 1.0 && std::isfinite(p) && q > 1.0 && std::isfinite(q)))
    throw DomainError("Hoelder check needs p, q in (1, inf)");
  HolderResult h;
  h.lhs = std::abs(pairing_A2(w, f, g));
  if (f.is_zero() || g.is_zero()) return h;
  const double pp = conjugate_exponent(p), qp = conjugate_exponent(q);
  auto bound = [&](MeasureConvention c) {
    return mixed_norm(g, NormSpec{q, InnerSpace::Hp, p, w, c}) *
           mixed_norm(f, NormSpec{qp, InnerSpace::Hp, pp, w, c});
  };
  h.bound = bound(MeasureConvention::with_r);
  h.bound_without_r = bound(MeasureConvention::without_r);
  return h;
}

// ---- equivalence sweeps ----

BlockMultiplierReport block_multiplier_check(const RadialWeight& w, double alpha, const BlockBasis& basis,
                          const InnerSpec& X, const TestFamily& family, int n_max) {
  if (!(alpha > 0.0)) throw DomainError("block multiplier sweep needs alpha > 0");
  if (X.X == InnerSpace::Hp && X.p < 1.0) throw DomainError("X must be H^p with p >= 1 or Bloch");
  if (X.X == InnerSpace::BMOA) throw DomainError("X must be H^p with p >= 1 or Bloch");
  const RadialWeight mu = power_transform(w, alpha);
  int top = 0;
  for (const auto& g : family.members) top = std::max(top, g.degree());
  const Eigen::VectorXd m = odd_moments(mu, top).cast<double>();
  const double K = basis.K();

  struct Row {
    int n;
    double lhs, rhs_moment, rhs_power;
    std::vector<double> coord;
  };
  const int nf = static_cast<int>(family.members.size());
  std::vector<std::vector<Row>> rows(nf);
  std::vector<int> skipped(nf, 0);
  const int n_top = std::min(n_max, basis.n_blocks() - 1);
  // moments are cached per weight; fill them before the parallel section
  for (int n = 0; n <= n_top; ++n) mu.moment(static_cast<double>(basis.M(n)));
  parallel_for(nf, [&](int i) {
    const auto& g = family.members[i];
    const double floor = 1e-150 * g.coeffs().cwiseAbs().maxCoeff();
    for (int n = 0; n <= n_top; ++n) {
      const AnalyticPoly Pg = block_project(basis, n, g);
      // empty blocks, and blocks where a dilated kernel has underflowed
      if (Pg.coeffs().cwiseAbs().maxCoeff() <= floor) {
        ++skipped[i];
        continue;
      }
      Eigen::VectorXcd c = Pg.coeffs();
      for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= m[k];
      const double lhs = inner_norm(AnalyticPoly(std::move(c)), X.X, X.p);
      const double base = inner_norm(Pg, X.X, X.p);
      rows[i].push_back({n, lhs, mu.moment(static_cast<double>(basis.M(n))) * base,
                         std::pow(K, -alpha * n) * base, {double(i), double(n)}});
    }
  });

  BlockMultiplierReport rep;
  // the refined pass adds the deepest populated block scale
  int deepest = 0;
  for (const auto& rr : rows)
    for (const auto& r : rr) deepest = std::max(deepest, r.n);
  std::vector<RatioSample> bm, rm, bp, rp;
  for (int i = 0; i < nf; ++i) {
    rep.blocks_skipped += skipped[i];
    for (const auto& r : rows[i]) {
      ++rep.blocks_used;
      rm.push_back({r.coord, r.lhs, r.rhs_moment});
      rp.push_back({r.coord, r.lhs, r.rhs_power});
      if (r.n < deepest || deepest == 0) {
        bm.push_back(rm.back());
        bp.push_back(rp.back());
      }
    }
  }
  rep.vs_moment = summarize_ratios(bm, rm);
  rep.vs_power = summarize_ratios(bp, rp);
  return rep;
}

RatioReport convention_equivalence_check(const RadialWeight& w, double p, double q,
                                         const BlockBasis& basis, const TestFamily& family) {
  const NormSpec with{q, InnerSpace::Hp, p, w, MeasureConvention::with_r};
  const NormSpec without{q, InnerSpace::Hp, p, w, MeasureConvention::without_r};
  return family_ratio([&](const AnalyticPoly& f) { return mixed_norm(f, with); },
                      [&](const AnalyticPoly& f) { return space_norm_Xq(f, without); },
                      coarse_family(family), family);
}

RatioReport decomposition_equivalence_check(const RadialWeight& w, const BlockBasis& basis,
                                            const InnerSpec& X, double q,
                                            const TestFamily& family) {
  const NormSpec spec{q, X.X, X.p, w, MeasureConvention::without_r};
  const double e = std::isinf(q) ? 1.0 : q;
  return family_ratio(
      [&](const AnalyticPoly& f) { return std::pow(decomposition_norm(f, basis, X, q), e); },
      [&](const AnalyticPoly& f) { return std::pow(space_norm_Xq(f, spec), e); },
      coarse_family(family), family);
}

}  // namespace mixnorm
