#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mixnorm/errors.hpp"
#include "mixnorm/operators.hpp"

using namespace mixnorm;

namespace {

AnalyticPoly random_poly(std::mt19937_64& rng, int deg) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd c(deg + 1);
  for (auto& v : c) v = cdouble(g(rng), g(rng));
  return AnalyticPoly(c);
}

std::vector<RadialWeight> dhat_weights() {
  return {RadialWeight::standard(0), RadialWeight::standard(1), RadialWeight::standard(-0.5),
          RadialWeight::logarithmic(2), power_transform(RadialWeight::standard(0), 2)};
}

Eigen::VectorXd uniform_radii(int n) {
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) r[i] = (i + 0.5) / n;
  return r;
}

}  // namespace

TEST(Kernel, StandardBinomial) {
  for (double a : {0.0, 1.0, 2.0}) {
    auto k = kernel_truncate(RadialWeight::standard(a), 512);
    // Taylor coefficients of (1 - u)^{-(2 + a)}
    double binom = 1.0;
    for (int n = 0; n <= 512; ++n) {
      EXPECT_NEAR(k.coeffs[n] / binom, 1.0, 1e-9) << "a=" << a << " n=" << n;
      binom *= (n + 2.0 + a) / (n + 1.0);
    }
  }
  auto k0 = kernel_truncate(RadialWeight::standard(0), 4);
  EXPECT_DOUBLE_EQ(k0.coeffs[0], 1.0);
  EXPECT_THROW(kernel_truncate(RadialWeight::standard(0), -1), DomainError);
}

TEST(Kernel, CoefficientsIncrease) {
  for (const auto& w : dhat_weights()) {
    auto k = kernel_truncate(w, 300);
    for (int n = 0; n <= 300; ++n) {
      EXPECT_GT(k.coeffs[n], 0.0);
      if (n > 0) EXPECT_GE(k.coeffs[n], k.coeffs[n - 1]) << w.spec();
    }
  }
}

TEST(Kernel, LogCoefficientsMatchTailScale) {
  // c_n is comparable to 1 / T(1 - 1/n)
  auto w = RadialWeight::logarithmic(2);
  auto k = kernel_truncate(w, 1 << 14);
  double lo = kInf, hi = 0.0;
  for (int n = 2; n <= (1 << 14); n *= 2) {
    const double ratio = k.coeffs[n] * w.tail_gap(1.0 / n);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_LT(hi / lo, 4.0);
}

TEST(KernelMean, StandardClosedForm) {
  auto w = RadialWeight::standard(0);
  auto k = kernel_truncate(w, 4096);
  // M_1(r, 1/(1 - a z)^2) = 1/(1 - s^2) with s = r|a|
  for (double s : {0.1, 0.5, 0.9, 0.98}) {
    const double a = std::sqrt(s);
    EXPECT_NEAR(kernel_derivative_mean(k, a, a, 0) * (1 - s * s), 1.0, 1e-10) << s;
    // rotating a leaves the mean unchanged
    EXPECT_NEAR(kernel_derivative_mean(k, std::polar(a, 2.1), a, 0) * (1 - s * s), 1.0, 1e-10);
  }
  for (const auto& v : dhat_weights()) {
    auto kv = kernel_truncate(v, 8);
    EXPECT_NEAR(kernel_derivative_mean(kv, 0.0, 0.5, 0), kv.coeffs[0], 1e-15);
  }
}

TEST(KernelMean, TruncationErrors) {
  auto k = kernel_truncate(RadialWeight::standard(0), 64);
  try {
    kernel_derivative_mean(k, 0.99, 0.99, 1);
    FAIL() << "expected a truncation error";
  } catch (const UnconvergedTruncation& e) {
    EXPECT_GT(e.required_degree(), 64);
    auto k2 = kernel_truncate(RadialWeight::standard(0), static_cast<int>(e.required_degree()));
    EXPECT_NO_THROW(kernel_derivative_mean(k2, 0.99, 0.99, 1));
  }
  EXPECT_THROW(kernel_derivative_mean(k, 1.0, 0.5, 0), DomainError);
}

TEST(KernelMean, RhsClosedForms) {
  auto w0 = RadialWeight::standard(0);
  auto wl = RadialWeight::logarithmic(2);
  for (double s : {0.2, 0.9, 0.999, 1 - 1e-9}) {
    EXPECT_NEAR(kernel_mean_rhs(w0, s, 1.0 - 1e-300, 0) * (1 - s), 1.0, 1e-9);
    const double L = std::log(std::exp(1.0) / (1 - s));
    EXPECT_NEAR(kernel_mean_rhs(wl, s, 1.0 - 1e-300, 0) / (1 + (L * L - 1) / 2), 1.0, 1e-9);
  }
  EXPECT_EQ(kernel_mean_rhs(w0, 0.0, 0.5, 2), 1.0);
}

TEST(KernelMean, TwoSidedProbe) {
  for (const auto& w : {RadialWeight::standard(0), RadialWeight::logarithmic(2)}) {
    for (int N : {0, 1}) {
      auto rep = kernel_mean_probe(w, N, 12, 0.99);
      EXPECT_TRUE(rep.audit.converged) << w.spec() << " N=" << N;
      EXPECT_LE(rep.ratio.spread(), 100.0) << w.spec() << " N=" << N;
      EXPECT_EQ(rep.ratio.verdict, Verdict::bounded);
      EXPECT_EQ(rep.audit.D2, 2 * rep.audit.D);
    }
  }
}

TEST(CoefficientOps, Examples) {
  auto w = RadialWeight::standard(0);
  EXPECT_NEAR(I_op(w, AnalyticPoly{1.0}).coeff(0).real(), 0.5, 1e-16);
  for (int k : {1, 5, 40})
    EXPECT_NEAR(I_op(w, AnalyticPoly::monomial(k)).coeff(k).real(), 1.0 / (2 * k + 2), 1e-16);
  for (int k : {0, 3, 17})
    EXPECT_NEAR(D_op(w, AnalyticPoly::monomial(k)).coeff(k).real(), k + 1.0, 1e-12);
  EXPECT_TRUE(D_op(w, AnalyticPoly()).is_zero());
  std::mt19937_64 rng(5);
  for (const auto& v : dhat_weights()) {
    auto g = random_poly(rng, 200);
    auto back = D_op(v, I_op(v, g));
    EXPECT_LE((back - g * 0.5).coeffs().cwiseAbs().maxCoeff(), 1e-15 * g.coeffs().cwiseAbs().maxCoeff());
  }
}

TEST(Projection, ReproducesPolynomials) {
  std::mt19937_64 rng(11);
  for (const auto& w : dhat_weights()) {
    auto ker = kernel_truncate(w, 64);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      auto f = random_poly(rng, 1 + static_cast<int>(rng() % 64));
      auto p = bergman_project_coeffs(w, f, ker);
      const double scale = f.coeffs().cwiseAbs().maxCoeff();
      for (int n = 0; n <= std::max(p.degree(), f.degree()); ++n)
        worst = std::max(worst, std::abs(p.coeff(n) - f.coeff(n)) / scale);
    }
    EXPECT_LE(worst, 1e-8) << w.spec();
  }
  auto w = RadialWeight::standard(0);
  EXPECT_THROW(bergman_project_coeffs(w, AnalyticPoly::monomial(10), kernel_truncate(w, 5)),
               PreconditionError);
}

TEST(Projection, ConjugateVanishes) {
  // angular orthogonality: conj(zeta) has no analytic component
  auto w = RadialWeight::standard(0);
  auto ker = kernel_truncate(w, 16);
  const auto radii = uniform_radii(40);
  Eigen::MatrixXcd v(40, 64);
  PolarSamples tmp(radii, Eigen::MatrixXcd::Zero(40, 64));
  for (int i = 0; i < 40; ++i)
    for (int m = 0; m < 64; ++m) v(i, m) = std::conj(std::polar(radii[i], tmp.theta(m)));
  PolarSamples f(radii, v);
  auto p = bergman_project_coeffs(w, f, ker);
  EXPECT_LE(p.coeffs().cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(bergman_project_coeffs(w, PolarSamples(radii, Eigen::MatrixXcd::Zero(40, 32)), ker),
               PreconditionError);
}

TEST(Projection, AnnulusIsConstant) {
  for (const auto& w : dhat_weights()) {
    auto ker = kernel_truncate(w, 32);
    const double t = 0.6, q = 2.0;
    auto f = annulus_test(t, q, uniform_radii(50), 128);
    auto p = bergman_project_coeffs(w, f, ker);
    const double expect = std::pow(t, -1 / q) * 2 * ker.coeffs[0] * weight_mass(w, t, 1, true);
    EXPECT_NEAR(p.coeff(0).real() / expect, 1.0, 1e-12) << w.spec();
    for (int n = 1; n <= 32; ++n) EXPECT_LE(std::abs(p.coeff(n)), 1e-13 * expect);

    // the maximal projection dominates and agrees at the origin
    const auto pts = default_eval_points(8);
    auto P = bergman_project(w, f, ker, pts);
    auto Pp = maximal_project(w, f, ker, pts);
    EXPECT_NEAR(Pp[0].real(), P[0].real(), 1e-12 * std::abs(P[0]));
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_GE(Pp[i].real(), std::abs(P[i]) * (1 - 1e-12));
  }
}

TEST(Probes, JOmega) {
  auto w0 = RadialWeight::standard(0);
  auto wl = RadialWeight::logarithmic(2);
  for (double t : {0.1, 0.5, 0.99, 1 - 1e-10}) {
    EXPECT_NEAR(J_omega(w0, t) / (t / (1 - t)), 1.0, 1e-9);
    const double L = std::log(std::exp(1.0) / (1 - t));
    EXPECT_NEAR(J_omega(wl, t) / ((L * L - 1) / 2), 1.0, 1e-9);
  }
  EXPECT_EQ(J_omega(w0, 0.0), 0.0);
  for (const auto& w : dhat_weights()) {
    JTable tab(w);
    EXPECT_EQ(tab(0.0), 0.0);
    for (double t : {0.3, 0.9, 0.999, 1 - 1e-7, 1 - 1e-13})
      EXPECT_NEAR(tab(t) / J_omega(w, t), 1.0, 1e-6) << w.spec() << " t=" << t;
  }
}

TEST(Probes, SchurWeightAndAnnulus) {
  auto w = RadialWeight::standard(0);
  for (double r : {0.0, 0.5, 0.99}) {
    EXPECT_NEAR(schur_weight(w, 2, r), std::pow(1 - r, -0.25), 1e-14);
    EXPECT_NEAR(schur_weight(w, 4, r), std::pow(1 - r, -3.0 / 16), 1e-14);
  }
  EXPECT_THROW(schur_weight(w, 1.0, 0.5), DomainError);
  EXPECT_NEAR(annulus_norm_q(w, 0.5), 0.75, 1e-14);
  EXPECT_NEAR(w.tail(0.5), 0.5, 1e-15);

  auto f = annulus_test(0.5, 2, uniform_radii(10), 8);
  for (int i = 0; i < 10; ++i) {
    const double m = integral_mean(f, f.radii[i], 1.5);
    EXPECT_NEAR(m, f.radii[i] > 0.5 ? std::sqrt(2.0) : 0.0, 1e-14);
  }
  for (const auto& v : dhat_weights()) {
    auto g = annulus_test(0.37, 3, uniform_radii(30), 8);
    NormSpec spec{3.0, InnerSpace::Hp, 2.0, v};
    EXPECT_NEAR(std::pow(mixed_norm(g, spec), 3) / annulus_norm_q(v, 0.37), 1.0, 1e-10) << v.spec();
    // squeezed toward the boundary the norm approaches the tail
    EXPECT_NEAR(annulus_norm_q(v, 1 - 1e-6) / v.tail(1 - 1e-6), 1.0, 2e-6);
  }
}

TEST(Probes, DivergenceFunctional) {
  auto w0 = RadialWeight::standard(0);
  auto wl = RadialWeight::logarithmic(2);
  EXPECT_EQ(divergence_functional(w0, 2, 0.5), 0.0);
  const double r0 = divergence_functional(w0, 2, 1 - 1e-6) / divergence_functional(w0, 2, 0.9);
  EXPECT_GE(r0, 0.25);
  EXPECT_LE(r0, 4.0);
  EXPECT_GE(divergence_functional(wl, 2, 1 - 1e-8) / divergence_functional(wl, 2, 0.99), 2.0);
  // leading order L(t) / sqrt(12)
  const double t = 1 - 1e-12, L = std::log(std::exp(1.0) / (1 - t));
  EXPECT_NEAR(divergence_functional(wl, 2, t) / (L / std::sqrt(12.0)), 1.0, 0.15);
}

TEST(Probes, SchurTest) {
  const int D = 4096;
  for (const auto& w : {RadialWeight::standard(0), RadialWeight::standard(1)}) {
    auto rep = schur_test_check(w, 2, kernel_truncate(w, D));
    EXPECT_EQ(rep.first.ratio.verdict, Verdict::bounded) << w.spec();
    EXPECT_EQ(rep.second.ratio.verdict, Verdict::bounded) << w.spec();
    EXPECT_TRUE(rep.first.audit.converged);
    EXPECT_GT(rep.model_min, 0.2);
    EXPECT_LT(rep.model_max, 5.0);
  }
  auto wl = RadialWeight::logarithmic(2);
  auto rep = schur_test_check(wl, 2, kernel_truncate(wl, D));
  EXPECT_EQ(rep.first.ratio.verdict, Verdict::unbounded_trend);
}
