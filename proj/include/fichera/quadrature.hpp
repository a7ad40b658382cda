#pragma once

// 1D Gauss-Legendre and Gauss-Lobatto rules on [-1,1].

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace fichera {

struct QuadRule {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
};

namespace detail {

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
inline void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) { p = 1.0; dp = 0.0; return; }
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace detail

// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
inline QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  QuadRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev initial guess, polished by Newton.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      detail::legendre(n, x, p, dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    detail::legendre(n, x, p, dp);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

// n-point Gauss-Lobatto-Legendre nodes (n >= 2), endpoints included.
// Used as the interpolation layout of the Lagrange basis.
inline Eigen::VectorXd gauss_lobatto_nodes(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto_nodes: n >= 2 required");
  Eigen::VectorXd x(n);
  x[0] = -1.0;
  x[n - 1] = 1.0;
  const int p = n - 1;  // interior nodes are the roots of P_p'
  for (int i = 1; i < n - 1; ++i) {
    // Chebyshev-Lobatto initial guess.
    double xi = -std::cos(M_PI * i / p);
    for (int it = 0; it < 100; ++it) {
      double pp, dp;
      detail::legendre(p, xi, pp, dp);
      // Newton on q = P_p'; q' from the Legendre ODE.
      double d2p = (2.0 * xi * dp - p * (p + 1) * pp) / (1.0 - xi * xi);
      double dx = dp / d2p;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[i] = xi;
  }
  // Symmetrize to make the set exactly invariant under x -> -x.
  if (n % 2 == 1) x[n / 2] = 0.0;
  for (int i = 0; i < n / 2; ++i) {
    double v = 0.5 * (x[i] - x[n - 1 - i]);
    x[i] = v;
    x[n - 1 - i] = -v;
  }
  return x;
}

}  // namespace fichera
