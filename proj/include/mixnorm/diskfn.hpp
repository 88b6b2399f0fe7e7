#pragma once

#include <Eigen/Core>

#include <complex>
#include <limits>
#include <vector>

#include "mixnorm/weights.hpp"

namespace mixnorm {

using cdouble = std::complex<double>;

// Taylor coefficients of an analytic polynomial, trailing zeros stripped.
class AnalyticPoly {
 public:
  AnalyticPoly() : c_(Eigen::VectorXcd::Zero(1)) {}
  explicit AnalyticPoly(Eigen::VectorXcd coeffs);
  AnalyticPoly(std::initializer_list<cdouble> coeffs);

  static AnalyticPoly monomial(int k, cdouble a = 1.0);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 1 && c_[0] == 0.0; }
  const Eigen::VectorXcd& coeffs() const { return c_; }
  cdouble coeff(int k) const { return k >= 0 && k < c_.size() ? c_[k] : cdouble(0); }

  cdouble operator()(cdouble z) const;
  AnalyticPoly derivative(int order = 1) const;

  AnalyticPoly operator+(const AnalyticPoly& o) const;
  AnalyticPoly operator-(const AnalyticPoly& o) const;
  AnalyticPoly operator*(cdouble s) const;

 private:
  void normalize();
  Eigen::VectorXcd c_;
};

// Samples on radii x uniform angles. Cell edges bracket each radius and carry
// the radial quadrature masses; by default they sit at midpoints, with 0 and 1 outside.
struct PolarSamples {
  Eigen::VectorXd radii;
  Eigen::VectorXd edges;
  Eigen::MatrixXcd values;  // radius x angle

  PolarSamples() = default;
  PolarSamples(Eigen::VectorXd radii, Eigen::MatrixXcd values);
  PolarSamples(Eigen::VectorXd radii, Eigen::VectorXd edges, Eigen::MatrixXcd values);

  int angle_count() const { return static_cast<int>(values.cols()); }
  double theta(int m) const;
  int radius_index(double r) const;  // throws DomainError off the grid
};

Eigen::VectorXd midpoint_edges(const Eigen::VectorXd& radii);

enum class InnerSpace { Hp, Bloch, BMOA };
enum class MeasureConvention { with_r, without_r };

struct NormSpec {
  double q = 2.0;  // outer exponent, kInf for the weak/sup norm
  InnerSpace inner = InnerSpace::Hp;
  double p = 2.0;  // inner exponent for Hp
  RadialWeight weight = RadialWeight::standard(0.0);
  MeasureConvention convention = MeasureConvention::with_r;
};

int next_pow2(long n);
// N = pow2 >= max(8 (deg + 1), 256)
int circle_sample_count(int degree);

// f(r e^{i theta_m}), m < N, via one inverse FFT
Eigen::VectorXcd circle_values(const AnalyticPoly& f, double r, int N = 0);

double integral_mean(const AnalyticPoly& f, double r, double p);
double integral_mean(const PolarSamples& f, double r, double p);
double mean_of_samples(const Eigen::Ref<const Eigen::VectorXcd>& v, double p);

// max over the circle, refined past the sample spacing
double circle_sup(const AnalyticPoly& f, double r);

double mixed_norm(const AnalyticPoly& f, const NormSpec& spec);
double mixed_norm(const PolarSamples& f, const NormSpec& spec);

double mixed_norm_weak(const AnalyticPoly& f, const RadialWeight& w, double p);
double mixed_norm_weak(const PolarSamples& f, const RadialWeight& w, double p);

double space_norm_Xq(const AnalyticPoly& f, const NormSpec& spec);

double inner_norm(const AnalyticPoly& f, InnerSpace X, double p);
double bloch_norm(const AnalyticPoly& f);
double hardy_norm(const AnalyticPoly& f, double p);
double bmoa_norm(const AnalyticPoly& f);

AnalyticPoly hadamard(const AnalyticPoly& f, const AnalyticPoly& g);
AnalyticPoly dilate(const AnalyticPoly& f, cdouble s);
AnalyticPoly cesaro_mean(const AnalyticPoly& f, int n);

// sup over r in [0, 1) of h(r) for h continuous with h(1-) finite or decaying;
// log grid in the gap plus golden refinement around the best node
double radial_sup(const std::function<double(double)>& h, int octaves = 60);

}  // namespace mixnorm
