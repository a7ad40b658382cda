#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fichera/lagrange.hpp"
#include "fichera/quadrature.hpp"

using namespace fichera;

TEST_CASE("gauss rule integrates monomials exactly up to degree 2n-1") {
  for (int n = 1; n <= 12; ++n) {
    QuadRule q = gauss_legendre(n);
    CHECK(q.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += q.weights[i] * std::pow(q.points[i], deg);
      double exact = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
}

TEST_CASE("gauss rule of known small orders") {
  QuadRule q2 = gauss_legendre(2);
  CHECK(q2.points[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  QuadRule q3 = gauss_legendre(3);
  CHECK(q3.points[0] == doctest::Approx(-std::sqrt(0.6)).epsilon(1e-15));
  CHECK(q3.points[1] == 0.0);
  CHECK(q3.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("lobatto nodes include endpoints and are symmetric") {
  for (int n = 2; n <= 17; ++n) {
    Eigen::VectorXd x = gauss_lobatto_nodes(n);
    CHECK(x[0] == -1.0);
    CHECK(x[n - 1] == 1.0);
    for (int i = 0; i < n; ++i) CHECK(x[i] == -x[n - 1 - i]);
    for (int i = 0; i + 1 < n; ++i) CHECK(x[i] < x[i + 1]);
  }
  // Degree 3: interior nodes at +-1/sqrt(5).
  Eigen::VectorXd x4 = gauss_lobatto_nodes(4);
  CHECK(x4[2] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("basis is a partition of unity with exact nodal values") {
  for (int p : {1, 2, 4, 8, 16}) {
    Basis1D b = Basis1D::make(p);
    Eigen::VectorXd v, d;
    for (double x : {-1.0, -0.7317, 0.0, 0.25, 0.9999, 1.0}) {
      b.eval_at(x, &v, &d);
      CHECK(v.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(d.sum()) < 1e-9 * p * p);
    }
    for (int i = 0; i <= p; ++i) {
      b.eval_at(b.nodes[i], &v);
      for (int j = 0; j <= p; ++j)
        CHECK(v[j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("basis derivatives reproduce polynomials exactly") {
  // Interpolate f(x) = x^p; derivative and second derivative must be exact.
  for (int p : {3, 6, 10}) {
    Basis1D b = Basis1D::make(p);
    Eigen::VectorXd coef(p + 1);
    for (int i = 0; i <= p; ++i) coef[i] = std::pow(b.nodes[i], p);
    Eigen::VectorXd v, d, d2;
    for (double x : {-0.9, -0.3, 0.11, 0.62, 0.97}) {
      b.eval_at(x, &v, &d, &d2);
      CHECK(coef.dot(v) == doctest::Approx(std::pow(x, p)).epsilon(1e-11));
      CHECK(coef.dot(d) == doctest::Approx(p * std::pow(x, p - 1)).epsilon(1e-10));
      CHECK(coef.dot(d2) ==
            doctest::Approx(p * (p - 1) * std::pow(x, p - 2)).epsilon(1e-9));
    }
  }
}

TEST_CASE("reference mass and stiffness matrices") {
  // p = 1: mass = [[2/3,1/3],[1/3,2/3]], stiffness = [[1/2,-1/2],[-1/2,1/2]].
  Basis1D b1 = Basis1D::make(1);
  CHECK(b1.mass_ref(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(b1.mass_ref(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(b1.stiff_ref(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(b1.stiff_ref(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));

  // Stiffness annihilates constants; mass row sums integrate the hat.
  for (int p : {4, 9, 16}) {
    Basis1D b = Basis1D::make(p);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(p + 1);
    CHECK((b.stiff_ref * ones).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(b.mass_ref.sum() == doctest::Approx(2.0).epsilon(1e-13));
    // Raising the quadrature order must not change the matrices.
    Basis1D bq = Basis1D::make(p, p + 6);
    CHECK((b.mass_ref - bq.mass_ref).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((b.stiff_ref - bq.stiff_ref).cwiseAbs().maxCoeff() < 1e-12);
  }
}
