#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fichera/assemble.hpp"
#include "fichera/mesh.hpp"
#include "fichera/space.hpp"

using namespace fichera;

namespace {

Eigen::VectorXd interpolate(const FeSpace& s,
                            const std::function<double(const Eigen::Vector3d&)>& f) {
  Eigen::VectorXd u(s.ndofs);
  for (int i = 0; i < s.ndofs; ++i) u[i] = f(s.dof_xyz[i]);
  return u;
}


double max_abs(const Eigen::SparseMatrix<double>& A) {
  double m = 0;
  for (int c = 0; c < A.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

double max_abs_diff(const Eigen::SparseMatrix<double>& A,
                    const Eigen::SparseMatrix<double>& B) {
  Eigen::SparseMatrix<double> D = A - B;
  return max_abs(D);
}

BCMap all_dirichlet() {
  return {{"wall", BC::Dirichlet}, {"sigma1", BC::Dirichlet}, {"sigma2", BC::Dirichlet}};
}

}  // namespace

TEST_CASE("patch test: linear functions have exact energy") {
  Geometry2D g = Geometry2D::make(Guide2D::Broken, 2.0, true);
  Mesh m = build_guide_mesh(g, GradingSpec{2, 0.1}, 1);
  FeSpace s = make_space(m, 4);
  AssembledSystem sys = assemble(s, all_dirichlet(), nullptr, true);
  double area = 2 * 2.0 + 1;
  Eigen::VectorXd ux = interpolate(s, [](const Eigen::Vector3d& x) { return x[0]; });
  Eigen::VectorXd uc = interpolate(s, [](const Eigen::Vector3d&) { return 1.0; });
  CHECK(ux.dot(sys.Kfull * ux) == doctest::Approx(area).epsilon(1e-12));
  CHECK(uc.dot(sys.Kfull * uc) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(uc.dot(sys.Kfull * ux)) < 1e-12);
  CHECK(uc.dot(sys.Mfull * uc) == doctest::Approx(area).epsilon(1e-12));
  // u = x*y has exact mixed energies too (tensor polynomial).
  Eigen::VectorXd uxy =
      interpolate(s, [](const Eigen::Vector3d& x) { return x[0] * x[1]; });
  // int |grad(xy)|^2 = int x^2 + y^2 over the guide domain [-1,2]^2 \ [0,2]^2.
  auto imom = [](double a, double b) { return (b * b * b - a * a * a) / 3.0; };
  double exact = 2 * (imom(-1, 2) * 1 + imom(-1, 0) * 3) -
                 (imom(-1, 0) * 1 + imom(-1, 0) * 1);
  // Simpler cross-check by symmetry: direct numeric value.
  (void)exact;
  double e1 = uxy.dot(sys.Kfull * uxy);
  // Independent quadrature of |grad(xy)|^2 = x^2+y^2 over the mesh.
  double e2 = 0;
  QuadRule q = gauss_legendre(4);
  for (int e = 0; e < int(m.elements.size()); ++e)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        MapEval me = map_eval(m, e, {q.points[i], q.points[j], 0});
        e2 += q.weights[i] * q.weights[j] * me.detJ *
              (me.x[0] * me.x[0] + me.x[1] * me.x[1]);
      }
  CHECK(e1 == doctest::Approx(e2).epsilon(1e-12));
}

TEST_CASE("matrices are symmetric and M is positive definite") {
  Geometry2D g = Geometry2D::make(Guide2D::Broken, 1.0, true);
  Mesh m = build_guide_mesh(g, GradingSpec{2, 0.1}, 1);
  FeSpace s = make_space(m, 6);
  AssembledSystem sys = assemble(s, all_dirichlet());
  Eigen::SparseMatrix<double> Kt = sys.K.transpose();
  Eigen::SparseMatrix<double> Mt = sys.M.transpose();
  CHECK(max_abs_diff(sys.K, Kt) < 1e-13);
  CHECK(max_abs_diff(sys.M, Mt) < 1e-13);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd v(sys.nfree);
    for (int i = 0; i < sys.nfree; ++i) v[i] = gauss(rng);
    CHECK(v.dot(sys.M * v) > 0);
    CHECK(v.dot(sys.K * v) >= 0);
  }
}

TEST_CASE("reference weights at R=1 reproduce the unweighted matrices") {
  Mesh m = build_reference_guide_mesh(GradingSpec{3, 0.1}, 2);
  FeSpace s = make_space(m, 5);
  WeightSpec w = WeightSpec::reference_guide(1.0);
  AssembledSystem a = assemble(s, all_dirichlet());
  AssembledSystem b = assemble(s, all_dirichlet(), &w);
  CHECK(max_abs_diff(a.K, b.K) < 1e-14);
  CHECK(max_abs_diff(a.M, b.M) < 1e-14);
}

TEST_CASE("quadrature order does not affect affine matrices") {
  Geometry2D g = Geometry2D::make(Guide2D::Broken, 2.0, true);
  Mesh m = build_guide_mesh(g, GradingSpec{2, 0.1}, 1);
  FeSpace s1 = make_space(m, 5);          // n_q = p+2
  FeSpace s2 = make_space(m, 5, 2 * 5 + 2);  // heavily overintegrated
  AssembledSystem a = assemble(s1, all_dirichlet());
  AssembledSystem b = assemble(s2, all_dirichlet());
  double kscale = max_abs(a.K);
  CHECK(max_abs_diff(a.K, b.K) < 1e-14 * kscale);
  CHECK(max_abs_diff(a.M, b.M) < 1e-14);
}

TEST_CASE("dirichlet elimination removes exactly the boundary dofs") {
  // 1D interval, p=1, one element, Dirichlet both ends: no free dofs.
  Mesh m = build_interval_mesh({0.0, 1.0});
  FeSpace s = make_space(m, 1);
  BCMap bc{{"left", BC::Dirichlet}, {"right", BC::Dirichlet}};
  AssembledSystem sys = assemble(s, bc);
  CHECK(sys.nfree == 0);
  BCMap bc2{{"left", BC::Dirichlet}, {"right", BC::Neumann}};
  CHECK(assemble(make_space(m, 3), bc2).nfree == 3);
}

TEST_CASE("unknown facet tag is rejected") {
  Geometry2D g = Geometry2D::make(Guide2D::Broken, 1.0, true);
  Mesh m = build_guide_mesh(g, GradingSpec{0, 0.1}, 1);
  FeSpace s = make_space(m, 2);
  BCMap bc{{"wall", BC::Dirichlet}};  // sigma tags missing
  CHECK_THROWS(assemble(s, bc));
}

TEST_CASE("boundary quadrature on known traces") {
  Geometry2D g = Geometry2D::make(Guide2D::Broken, 2.0, true);
  Mesh m = build_guide_mesh(g, GradingSpec{0, 0.1}, 2);
  FeSpace s = make_space(m, 6);
  // v = x2 on sigma1 = {2} x (-1,0): int |d_tau v|^2 = 1, int v^2 = 1/3.
  Eigen::VectorXd v = interpolate(s, [](const Eigen::Vector3d& x) { return x[1]; });
  CHECK(boundary_quadrature(s, "sigma1", v, BoundaryIntegrand::TangentialGradSq) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(boundary_quadrature(s, "sigma1", v, BoundaryIntegrand::ValueSq) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  // v = x1^2 * x2: d^2/dn^2 = 2 x2 on sigma1; int v * d2n = int 4*2*x2^2 = 8/3.
  Eigen::VectorXd w =
      interpolate(s, [](const Eigen::Vector3d& x) { return x[0] * x[0] * x[1]; });
  CHECK(boundary_quadrature(s, "sigma1", w, BoundaryIntegrand::ValueTimesSecondNormal) ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  // Zero function: zero for every integrand.
  Eigen::VectorXd z = Eigen::VectorXd::Zero(s.ndofs);
  for (auto which : {BoundaryIntegrand::TangentialGradSq, BoundaryIntegrand::ValueSq,
                     BoundaryIntegrand::ValueTimesSecondNormal})
    CHECK(boundary_quadrature(s, "sigma1", z, which) == 0.0);
  CHECK_THROWS(boundary_quadrature(s, "nonexistent", z, BoundaryIntegrand::ValueSq));
}

TEST_CASE("helmholtz lifting: zero data gives the zero solution") {
  Mesh m = build_square_mesh(0.0, 1.0, 2);
  FeSpace s = make_space(m, 4);
  BCMap bc{{"xmin", BC::Dirichlet}, {"xmax", BC::Dirichlet},
           {"ymin", BC::Dirichlet}, {"ymax", BC::Dirichlet}};
  AssembledSystem sys = assemble(s, bc, nullptr, true);
  Eigen::VectorXd u =
      solve_helmholtz(s, sys, 0.0, [](const Eigen::Vector3d&) { return 0.0; });
  CHECK(u.cwiseAbs().maxCoeff() < 1e-14);
  // Harmonic data reproduced exactly: u = x is harmonic, boundary trace x.
  Eigen::VectorXd ux =
      solve_helmholtz(s, sys, 0.0, [](const Eigen::Vector3d& x) { return x[0]; });
  for (int i = 0; i < s.ndofs; ++i)
    CHECK(ux[i] == doctest::Approx(s.dof_xyz[i][0]).epsilon(1e-11));
}

TEST_CASE("point evaluation reproduces interpolated polynomials") {
  Geometry2D g = Geometry2D::make(Guide2D::Broken, 2.0, true);
  Mesh m = build_guide_mesh(g, GradingSpec{2, 0.1}, 1);
  FeSpace s = make_space(m, 5);
  auto f = [](const Eigen::Vector3d& x) {
    return x[0] * x[0] * x[1] + 0.5 * x[1] * x[1];
  };
  Eigen::VectorXd u = interpolate(s, f);
  Eigen::Vector3d grad;
  for (auto [px, py] : {std::pair{-0.5, -0.5}, {1.3, -0.2}, {-0.9, 1.7}, {0.0, -1.0}}) {
    Eigen::Vector3d x(px, py, 0);
    CHECK(fe_eval(s, u, x, &grad) == doctest::Approx(f(x)).epsilon(1e-12));
    CHECK(grad[0] == doctest::Approx(2 * px * py).epsilon(1e-10));
    CHECK(grad[1] == doctest::Approx(px * px + py).epsilon(1e-10));
  }
}

TEST_CASE("matrix export format") {
  Mesh m = build_interval_mesh({0.0, 1.0});
  FeSpace s = make_space(m, 1);
  BCMap bc{{"left", BC::Neumann}, {"right", BC::Neumann}};
  AssembledSystem sys = assemble(s, bc);
  std::string txt = export_matrix(sys.M);
  CHECK(txt.find("0 0 0.333333333333333") != std::string::npos);
  CHECK(std::count(txt.begin(), txt.end(), '\n') == 4);
}
