#include "mixnorm/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <map>
#include <memory>
#include <mutex>

namespace mixnorm {

namespace {

// Golub-Welsch for a starting guess, then Newton on P_n for full accuracy.
GaussRule make_rule(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  GaussRule rule{es.eigenvalues(), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    double x = rule.x[i], dp = 1.0;
    for (int it = 0; it < 6; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-17) break;
    }
    rule.x[i] = x;
    rule.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(make_rule(n));
  return *slot;
}

std::vector<double> octave_breaks(double lo, double hi, int depth, double ratio) {
  std::vector<double> b{hi};
  double x = hi;
  for (int k = 0; k < depth; ++k) {
    x /= ratio;
    if (x <= lo || (lo > 0 && x - lo < 0.25 * (x * ratio - x))) break;
    b.push_back(x);
  }
  b.push_back(lo);
  std::reverse(b.begin(), b.end());
  return b;
}

std::vector<double> two_sided_breaks(double a, double b, int depth) {
  const double m = 0.5 * (a + b), h = 0.5 * (b - a);
  std::vector<double> out{a};
  for (int k = depth; k >= 1; --k) out.push_back(a + h * std::ldexp(1.0, -k));
  out.push_back(m);
  for (int k = 1; k <= depth; ++k) out.push_back(b - h * std::ldexp(1.0, -k));
  out.push_back(b);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace mixnorm
