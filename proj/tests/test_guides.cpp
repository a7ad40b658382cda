#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fichera/guides.hpp"

using namespace fichera;

namespace {
const double PI2 = M_PI * M_PI;
}

TEST_CASE("closed-form branch of the transverse curve") {
  CHECK(LambdaCurve::closed_form(0.0) == doctest::Approx(0.5 * PI2).epsilon(1e-15));
  CHECK(LambdaCurve::closed_form(-0.5) == doctest::Approx(2.0 * PI2).epsilon(1e-15));
  // Decreasing on (-1, 0].
  CHECK(LambdaCurve::closed_form(-0.9) > LambdaCurve::closed_form(-0.5));
  CHECK(LambdaCurve::closed_form(-0.5) > LambdaCurve::closed_form(-0.1));
  CHECK_THROWS(LambdaCurve::closed_form(-1.0));
  CHECK_THROWS(LambdaCurve::closed_form(0.5));
}

TEST_CASE("monotone cubic interpolant") {
  // Reproduces linear data exactly.
  std::vector<double> x{0, 1, 2.5, 4}, y{1, 3, 6, 9};
  Pchip lin = Pchip::fit(x, y);
  for (double t : {0.3, 1.7, 3.9})
    CHECK(lin(t) == doctest::Approx(1 + 2 * t).epsilon(1e-14));

  // Interpolates nodes and preserves monotonicity on steep data.
  std::vector<double> xs{0, 0.1, 0.5, 1, 2}, ys{0, 0.9, 0.95, 0.97, 1.0};
  Pchip p = Pchip::fit(xs, ys);
  for (size_t i = 0; i < xs.size(); ++i)
    CHECK(p(xs[i]) == doctest::Approx(ys[i]).epsilon(1e-14));
  double prev = p(0.0);
  for (int i = 1; i <= 400; ++i) {
    double v = p(2.0 * i / 400.0);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  CHECK_THROWS(Pchip::fit({0.0, 0.0}, {1.0, 2.0}));
}

TEST_CASE("weighted reference solve agrees with a direct mesh") {
  Discretization disc;
  disc.p = 12;
  ReferenceGuide guide(disc);
  double lam_ref = guide.solve(2.0, true).values[0];
  auto [dir, mix] =
      dirichlet_mixed_pair(Geometry2D::make(Guide2D::Broken, 2.0, true), 2.0,
                           disc);
  CHECK(lam_ref == doctest::Approx(mix.values[0]).epsilon(1e-8));
  CHECK(mix.values[0] < dir.values[0]);
  // Both bracket values sit in (pi^2/2, pi^2).
  CHECK(mix.values[0] > 0.5 * PI2);
  CHECK(dir.values[0] < PI2);
}

TEST_CASE("curve sweep invariants and evaluation") {
  Discretization disc;
  disc.p = 8;
  ReferenceGuide guide(disc);
  LambdaCurve curve = sweep_lambda(guide, {0.25, 0.7, 2.0, 5.0, 8.0});
  // Limit estimate lands on the known plateau.
  CHECK(curve.lambda_inf / PI2 > 0.90);
  CHECK(curve.lambda_inf / PI2 < 0.94);
  CHECK(curve.omega == doctest::Approx(std::sqrt(PI2 - curve.lambda_inf)));
  // value() hits the samples and the x3 = 0 limit.
  CHECK(curve.value(0.0) == doctest::Approx(0.5 * PI2).epsilon(1e-14));
  for (const auto& s : curve.samples)
    CHECK(curve.value(s.x3) == doctest::Approx(s.lambda).epsilon(1e-12));
  // Nondecreasing along a dense grid crossing into the exponential tail.
  double prev = curve.value(1e-6);
  for (int i = 1; i <= 300; ++i) {
    double v = curve.value(12.0 * i / 300.0);
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
  CHECK(curve.value(40.0) <= curve.lambda_inf);
  CHECK(curve.value(40.0) > curve.value(8.0));
}

TEST_CASE("second mixed eigenvalue stays above pi^2") {
  Discretization disc;
  disc.p = 8;
  ReferenceGuide guide(disc);
  EigenResult res = guide.solve(4.0, true, 2);
  CHECK(res.values[0] < PI2);
  CHECK(res.values[1] >= PI2 - 1e-6);
}

TEST_CASE("separated-variable tail matches the FE ground state") {
  Discretization disc;
  disc.p = 12;
  const double R = 5.0;
  Geometry2D geom = Geometry2D::make(Guide2D::Broken, R, true);
  Mesh m = build_guide_mesh(geom, disc.grading, disc.base);
  FeSpace s = make_space(m, disc.p);
  AssembledSystem sys = assemble(s, geom.bc_map);
  EigenResult res = smallest_eigenpairs(sys, 1, disc.tol, disc.seed);
  eigenvector_sign_normalize(res, sys);
  Eigen::VectorXd u = sys.extend_vec(res.vectors.col(0));
  double lam = res.values[0];

  SeriesSolution sol = series_from_fem(s, u, R, lam, 30);

  // Mid-strip pointwise agreement.
  for (auto [x1, x2] : {std::pair{2.5, -0.5}, {2.5, -0.37}, {1.0, -0.8}}) {
    double se = series_eval(sol, x1, x2);
    double fe = fe_eval(s, u, Eigen::Vector3d(x1, x2, 0.0));
    CHECK(se == doctest::Approx(fe).epsilon(2e-6));
  }
  // Dirichlet walls of the strip hold termwise.
  CHECK(std::abs(series_eval(sol, 2.0, -1.0)) < 1e-13);
  CHECK(std::abs(series_eval(sol, 2.0, 0.0)) < 1e-13);
  // Neumann far end: axial derivative vanishes exactly in each term.
  CHECK(std::abs(series_eval(sol, R, -0.5, 1, 0)) < 1e-13);
  // Coefficient bound from the trace norm: sum g_k^2 is finite and modest.
  double gsq = 0;
  for (double gk : sol.g) gsq += gk * gk;
  CHECK(gsq < 10.0);
  // Trace decay along cross-sections: log-linear with slope <= -omega.
  double omega = std::sqrt(PI2 - lam);
  auto strip_norm = [&](double rho) {
    QuadRule q = gauss_legendre(40);
    double out = 0;
    for (int i = 0; i < q.points.size(); ++i) {
      double x2 = -0.5 + 0.5 * q.points[i];
      double v = series_eval(sol, rho, x2);
      out += 0.5 * q.weights[i] * v * v;
    }
    return std::sqrt(out);
  };
  double s1 = strip_norm(1.0), s2 = strip_norm(2.0), s3 = strip_norm(3.0);
  CHECK(std::log(s2 / s1) <= -omega + 0.05);
  CHECK(std::log(s3 / s2) <= -omega + 0.05);
}

TEST_CASE("boundary formula for the eigenvalue derivative") {
  Discretization disc;
  disc.p = 10;
  ReferenceGuide guide(disc);
  Geometry2D geom = Geometry2D::make(Guide2D::Broken, 1.5, true);
  const double R = 1.5, h = 1e-3;
  double lam = 0;
  double dlam = eigen_derivative(geom, R, disc, &lam);
  CHECK(dlam > 0);
  double fd = (guide.solve(R + h, true).values[0] -
               guide.solve(R - h, true).values[0]) /
              (2 * h);
  CHECK(dlam == doctest::Approx(fd).epsilon(1e-3));

  // Lower bound (pi^2 - lambda) * boundary mass.
  Mesh m = build_guide_mesh(geom, disc.grading, disc.base);
  FeSpace s = make_space(m, disc.p);
  AssembledSystem sys = assemble(s, geom.bc_map);
  EigenResult res = smallest_eigenpairs(sys, 1, disc.tol, disc.seed);
  Eigen::VectorXd u = sys.extend_vec(res.vectors.col(0));
  double bmass =
      boundary_quadrature(s, "sigma1", u, BoundaryIntegrand::ValueSq) +
      boundary_quadrature(s, "sigma2", u, BoundaryIntegrand::ValueSq);
  CHECK(dlam >= (PI2 - res.values[0]) * bmass - 1e-10);
}
