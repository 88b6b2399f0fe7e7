#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "mixnorm/diskfn.hpp"
#include "mixnorm/report.hpp"
#include "mixnorm/weights.hpp"

namespace mixnorm {

// Reproducing kernel B_z(zeta) = sum c_n (conj(z) zeta)^n, c_n = 1 / (2 omega_{2n+1}).
struct KernelTruncation {
  RadialWeight weight = RadialWeight::standard(0.0);
  int degree = 0;
  Eigen::VectorXd coeffs;

  // sum_{n <= degree} c_n u^n
  cdouble operator()(cdouble u) const;
};

KernelTruncation kernel_truncate(const RadialWeight& w, int D);

// c_D D^N s^D / (1 - s), the truncation tail of the N-th derivative at |conj(a) z| = s
double kernel_tail_bound(const KernelTruncation& ker, int D, double s, int N);
// smallest power of two D with tail bound below tol * N! c_N (needs ker.degree >= D)
int required_kernel_degree(const RadialWeight& w, double s, int N, double tol = 1e-10);

// M_1(r, B_a^{(N)}) from the first `degree` + 1 coefficients (all when negative)
double kernel_derivative_mean(const KernelTruncation& ker, cdouble a, double r, int N,
                              int degree = -1, double tol = 1e-10);
// 1 + integral over [0, r|a|] of dt / ((1 - t)^{N+1} T(t))
double kernel_mean_rhs(const RadialWeight& w, cdouble a, double r, int N);

AnalyticPoly I_op(const RadialWeight& w, const AnalyticPoly& g);
AnalyticPoly D_op(const RadialWeight& w, const AnalyticPoly& g);

// Projection of a polynomial computed from its samples on the weight's radial
// rule (circle FFTs plus radial quadrature); equals f up to quadrature error.
AnalyticPoly bergman_project_coeffs(const RadialWeight& w, const AnalyticPoly& f,
                                    const KernelTruncation& ker);
// Projection of sampled data: angular FFT per radius, exact cell moments radially.
AnalyticPoly bergman_project_coeffs(const RadialWeight& w, const PolarSamples& f,
                                    const KernelTruncation& ker);

std::vector<cdouble> bergman_project(const RadialWeight& w, const AnalyticPoly& f,
                                     const KernelTruncation& ker,
                                     const std::vector<cdouble>& eval_points);
std::vector<cdouble> bergman_project(const RadialWeight& w, const PolarSamples& f,
                                     const KernelTruncation& ker,
                                     const std::vector<cdouble>& eval_points);
std::vector<cdouble> maximal_project(const RadialWeight& w, const PolarSamples& f,
                                     const KernelTruncation& ker,
                                     const std::vector<cdouble>& eval_points);

// positive axis points 1 - 2^{-j/2}, j = 0..j_max
std::vector<cdouble> default_eval_points(int j_max = 12);

// ---- probes for the projection dichotomy ----

double J_omega(const RadialWeight& w, double t);

// J tabulated on v = -log(1 - x) with Hermite cubics; dJ/dv = 1 / T(e^{-v})
class JTable {
 public:
  explicit JTable(const RadialWeight& w, double v_max = 76.0, int per_unit = 32);
  double operator()(double x) const;
  double at_gap(double u) const;  // J(1 - u)

 private:
  RadialWeight w_;
  double h_;
  std::vector<double> J_, dJ_;
};

double schur_weight(const RadialWeight& w, double q, double r);

// t^{-1/q} on r > t; one cell edge is moved onto t so the sampled norm is exact
PolarSamples annulus_test(double t, double q, const Eigen::VectorXd& radii, int angles = 256);
// t^{-1} integral over [t, 1] of r omega
double annulus_norm_q(const RadialWeight& w, double t);

double divergence_functional(const RadialWeight& w, double q, double t);

struct TruncationAudit {
  int D = 0;
  int D2 = 0;
  double max_rel_change = 0.0;
  bool converged = true;
};

struct ProbeReport {
  std::string label;
  std::vector<std::vector<double>> grid;
  std::vector<double> lhs, rhs;
  RatioReport ratio;
  TruncationAudit audit;
};

// Two-sided kernel mean estimate over s = r|a| in [0.01, s_max] at |a| = a_abs.
// The ratio report compares the grid at degree D (base) against 2D (refined).
ProbeReport kernel_mean_probe(const RadialWeight& w, int N, int n_points = 40,
                              double s_max = 0.999, double a_abs = 0.9995, double tol = 1e-10);

// Both Schur integrals with the kernel mean modelled by 1 + J(rs). The model is
// spot-checked against the exact kernel mean for rs <= 0.99 (model_min/max are the
// extreme ratios); the audit slot compares that spot check at degree D/2 and D.
struct SchurReport {
  ProbeReport first;   // int h(s)^{q'} M_1(B_r, s) s omega(s) ds / h(r)^{q'}
  ProbeReport second;  // int h(r)^q M_1(B_s, r) r omega(r) dr / h(s)^q
  double model_min = 0.0, model_max = 0.0;
};

SchurReport schur_test_check(const RadialWeight& w, double q, const KernelTruncation& ker,
                             const SweepGrid& r_grid = radial_sweep_grid(),
                             const SweepGrid& s_grid = radial_sweep_grid());

}  // namespace mixnorm
