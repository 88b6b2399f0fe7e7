#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mixnorm/errors.hpp"
#include "mixnorm/quadrature.hpp"
#include "mixnorm/verify.hpp"

using namespace mixnorm;

namespace {

AnalyticPoly random_poly(std::mt19937_64& rng, int deg) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd c(deg + 1);
  for (auto& v : c) v = cdouble(g(rng), g(rng));
  return AnalyticPoly(c);
}

BlockBasis dyadic(const RadialWeight& w, int n_max = 16) {
  return BlockBasis(build_schedule(w, 2.0, n_max), 1);
}

}  // namespace

TEST(RatioSweep, Examples) {
  auto grid = radial_sweep_grid();
  auto one = [](const std::vector<double>&) { return 1.0; };
  auto f = [](const std::vector<double>& c) { return 1.0 / (1.5 - c[0]); };
  auto same = ratio_sweep(f, f, grid);
  EXPECT_EQ(same.ratio_min, 1.0);
  EXPECT_EQ(same.ratio_max, 1.0);
  EXPECT_EQ(same.verdict, Verdict::bounded);
  auto twice = ratio_sweep([&](const std::vector<double>& c) { return 2 * f(c); }, f, grid);
  EXPECT_EQ(twice.ratio_min, 2.0);
  EXPECT_EQ(twice.ratio_max, 2.0);
  auto lg = ratio_sweep([](const std::vector<double>& c) { return std::log(1 / (1 - c[0])); }, one,
                        grid);
  EXPECT_EQ(lg.verdict, Verdict::unbounded_trend);
  auto zero = ratio_sweep(one, [](const std::vector<double>& c) { return c[0] < 0.5 ? 0.0 : 1.0; },
                          grid);
  EXPECT_GT(zero.n_excluded, 0);
}

TEST(Pairing, A2Examples) {
  auto w = RadialWeight::standard(0);
  EXPECT_NEAR(pairing_A2(w, AnalyticPoly{1.0}, AnalyticPoly{1.0}).real(), 0.5, 1e-16);
  EXPECT_EQ(pairing_A2(w, AnalyticPoly::monomial(1), AnalyticPoly{1.0}), cdouble(0.0));
  EXPECT_NEAR(pairing_A2(w, AnalyticPoly::monomial(1), AnalyticPoly::monomial(1)).real(), 0.25,
              1e-16);
}

TEST(Pairing, SesquilinearAndDiagonal) {
  std::mt19937_64 rng(3);
  for (const auto& w : {RadialWeight::standard(0), RadialWeight::standard(1),
                        RadialWeight::logarithmic(2)}) {
    auto f1 = random_poly(rng, 40), f2 = random_poly(rng, 30), g = random_poly(rng, 50);
    const cdouble a(0.3, -1.2), b(2.0, 0.5);
    const cdouble lin = pairing_A2(w, f1 * a + f2 * b, g);
    const cdouble expect = a * pairing_A2(w, f1, g) + b * pairing_A2(w, f2, g);
    EXPECT_LE(std::abs(lin - expect), 1e-14 * std::abs(expect));
    const cdouble conj_lin = pairing_A2(w, g, f1 * a);
    EXPECT_LE(std::abs(conj_lin - std::conj(a) * pairing_A2(w, g, f1)), 1e-14 * std::abs(conj_lin));
    const cdouble d = pairing_A2(w, f1, f1);
    EXPECT_GE(d.real(), 0.0);
    EXPECT_EQ(d.imag(), 0.0);
    const double n = mixed_norm(f1, NormSpec{2, InnerSpace::Hp, 2, w});
    EXPECT_NEAR(d.real() / (n * n), 1.0, 1e-9) << w.spec();
  }
}

TEST(Pairing, SmallP) {
  auto w = RadialWeight::standard(0);
  const AnalyticPoly one{1.0}, z = AnalyticPoly::monomial(1);
  EXPECT_NEAR(pairing_small_p(w, one, one, 0.5, 2).real(), 0.25, 1e-15);
  EXPECT_EQ(pairing_small_p(w, z, one, 0.5, 2), cdouble(0.0));
  // q = 1/2: mu = nu_0 * T^2 = (1 - r)^2; brute-force the moment
  const double mu3 = integrate([](double r) { return r * r * r * (1 - r) * (1 - r); }, 0.0, 1.0).value;
  EXPECT_NEAR(mu3, 1.0 / 60, 1e-15);
  EXPECT_NEAR(pairing_small_p(w, z, z, 0.5, 0.5).real(), mu3 * 0.25, 1e-13);
  // p = 1/3 pairs with nu_1
  const double nu1 = integrate([](double r) { return 2 * r * r * r * (1 - r * r); }, 0.0, 1.0).value;
  EXPECT_NEAR(pairing_small_p(w, z, z, 1.0 / 3, 2).real(), 0.25 * nu1, 1e-13);
  EXPECT_THROW(pairing_small_p(w, one, one, 1.0, 2), DomainError);
}

TEST(Holder, Examples) {
  auto w = RadialWeight::standard(0);
  for (int k : {0, 3, 20}) {
    auto f = AnalyticPoly::monomial(k);
    auto h = holder_pairing_check(w, 2, 2, f, f);
    EXPECT_NEAR(h.lhs, 1.0 / (2 * k + 2), 1e-15);
    EXPECT_LE(h.lhs, h.bound * (1 + 1e-12));
  }
  auto h0 = holder_pairing_check(w, 2, 2, AnalyticPoly(), AnalyticPoly::monomial(2));
  EXPECT_EQ(h0.lhs, 0.0);
  EXPECT_EQ(h0.bound, 0.0);
  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    auto f = random_poly(rng, 1 + rng() % 40), g = random_poly(rng, 1 + rng() % 40);
    auto h = holder_pairing_check(w, 2, 2, f, g);
    EXPECT_LE(h.lhs, h.bound * (1 + 1e-12));
  }
  for (int i = 0; i < 20; ++i) {
    auto f = random_poly(rng, 1 + rng() % 40), g = random_poly(rng, 1 + rng() % 40);
    auto h = holder_pairing_check(w, 3, 1.5, f, g);
    EXPECT_LE(h.lhs, h.bound * (1 + 1e-12));
  }
}

TEST(Family, DeterministicComposition) {
  auto b = dyadic(RadialWeight::standard(0));
  auto f1 = make_test_family(b), f2 = make_test_family(b);
  EXPECT_EQ(f1.seed, kFamilySeed);
  EXPECT_EQ(f1.cap, 1024);  // M_10 for K = 2
  ASSERT_EQ(f1.members.size(), 60u);
  for (std::size_t i = 0; i < f1.members.size(); ++i) {
    EXPECT_EQ(f1.members[i].coeffs(), f2.members[i].coeffs());
    EXPECT_LE(f1.members[i].degree(), f1.cap);
  }
  EXPECT_EQ(std::count(f1.kinds.begin(), f1.kinds.end(), "monomial"), 10);
  auto f3 = make_test_family(b, 7);
  EXPECT_NE(f3.members[0].coeffs(), f1.members[0].coeffs());

  auto c = coarse_family(f1);
  EXPECT_EQ(c.cap, 256);
  for (std::size_t i = 0; i < c.members.size(); ++i) {
    EXPECT_LE(c.members[i].degree(), 256);
    EXPECT_EQ(c.members[i].coeff(7), f1.members[i].coeff(7));
  }
}

TEST(BlockMultiplier, DyadicStandard) {
  auto w = RadialWeight::standard(0);
  auto b = dyadic(w);
  auto fam = make_test_family(b);
  auto rep = block_multiplier_check(w, 1.0, b, {}, fam);
  EXPECT_EQ(rep.vs_moment.verdict, Verdict::bounded);
  EXPECT_EQ(rep.vs_power.verdict, Verdict::bounded);
  EXPECT_LE(rep.vs_power.spread(), 100);
  EXPECT_GT(rep.blocks_used, 100);
  // z^{M_n} alone in window n: lhs = mu_{2 M_n + 1}, rhs = mu_{M_n}
  const RadialWeight mu = power_transform(w, 1.0);
  TestFamily single{1, 1024, {AnalyticPoly::monomial(64)}, {"monomial"}};
  auto one = block_multiplier_check(w, 1.0, b, {}, single);
  ASSERT_EQ(one.blocks_used, 1);
  EXPECT_NEAR(one.vs_moment.ratio_max, mu.moment(129) / mu.moment(64), 1e-12);
  EXPECT_THROW(block_multiplier_check(w, 1.0, b, {InnerSpace::Hp, 0.5}, fam), DomainError);
}

TEST(Convention, ConstantAndFamily) {
  auto w = RadialWeight::standard(1);
  BlockBasis b(build_schedule(w, choose_K(w), 16), 1);
  TestFamily one{1, 64, {AnalyticPoly{1.0}, AnalyticPoly()}, {"const", "zero"}};
  for (double q : {1.0, 2.0}) {
    auto r = convention_equivalence_check(w, 2, q, b, one);
    EXPECT_NEAR(r.ratio_max, std::pow(w.moment(1) / w.moment(0), 1 / q), 1e-12);
    EXPECT_EQ(r.n_excluded, 1);
  }
  auto fam = make_test_family(b, kFamilySeed, 512);
  auto r = convention_equivalence_check(w, 2, 2, b, fam);
  EXPECT_EQ(r.verdict, Verdict::bounded);
  EXPECT_LE(r.ratio_max, 1.0);
}

TEST(Decomposition, SingleBlockAndFamily) {
  auto w = RadialWeight::standard(0);
  auto b = dyadic(w);
  // z^{2^n}: one term K^{-n} against integral of r^{q 2^n} dr
  TestFamily single{1, 1024, {AnalyticPoly::monomial(32)}, {"monomial"}};
  auto r1 = decomposition_equivalence_check(w, b, {}, 2, single);
  EXPECT_NEAR(r1.ratio_max, std::pow(2.0, -5) * (2 * 32 + 1), 1e-10);
  auto fam = make_test_family(b);
  for (double q : {0.5, 2.0, kInf}) {
    auto r = decomposition_equivalence_check(w, b, {}, q, fam);
    EXPECT_EQ(r.verdict, Verdict::bounded) << q;
    EXPECT_LE(r.spread(), 100) << q;
  }
}
