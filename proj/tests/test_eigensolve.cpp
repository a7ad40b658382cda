#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fichera/eigensolve.hpp"
#include "fichera/mesh.hpp"
#include "fichera/space.hpp"

using namespace fichera;

namespace {

const double PI2 = M_PI * M_PI;

AssembledSystem interval_system(int cells, int p, BC right) {
  std::vector<double> pts;
  for (int i = 0; i <= cells; ++i) pts.push_back(double(i) / cells);
  Mesh m = build_interval_mesh(pts);
  FeSpace s = make_space(m, p);
  BCMap bc{{"left", BC::Dirichlet}, {"right", right}};
  return assemble(s, bc);
}

// Mixed square (-1,0)^2: Dirichlet on the x=-1 / y=-1 sides, Neumann on
// the x=0 / y=0 sides.
struct MixedSquare {
  Mesh mesh;
  FeSpace space;
  AssembledSystem sys;
  MixedSquare(double lo, double hi, int cells, int p)
      : mesh(build_square_mesh(lo, hi, cells)), space(make_space(mesh, p)) {
    BCMap bc{{"xmin", BC::Dirichlet}, {"ymin", BC::Dirichlet},
             {"xmax", BC::Neumann}, {"ymax", BC::Neumann}};
    sys = assemble(space, bc);
  }
};

}  // namespace

TEST_CASE("dirichlet interval eigenvalues converge to k^2 pi^2") {
  AssembledSystem sys = interval_system(4, 8, BC::Dirichlet);
  EigenResult r = smallest_eigenpairs(sys, 3);
  CHECK(r.values[0] == doctest::Approx(PI2).epsilon(1e-12));
  CHECK(r.values[1] == doctest::Approx(4 * PI2).epsilon(1e-11));
  CHECK(r.values[2] == doctest::Approx(9 * PI2).epsilon(1e-9));
  for (int i = 0; i < 3; ++i) CHECK(r.residuals[i] < 1e-10 * r.values[i]);
  CHECK(std::is_sorted(r.values.begin(), r.values.end()));
}

TEST_CASE("mixed square spectrum") {
  MixedSquare sq(-1.0, 0.0, 2, 10);
  EigenResult r = smallest_eigenpairs(sq.sys, 4);
  CHECK(r.values[0] == doctest::Approx(0.5 * PI2).epsilon(1e-10));
  CHECK(r.values[1] == doctest::Approx(2.5 * PI2).epsilon(1e-9));
  CHECK(r.values[2] == doctest::Approx(2.5 * PI2).epsilon(1e-9));
  CHECK(r.values[3] == doctest::Approx(4.5 * PI2).epsilon(1e-8));
  // M-orthonormality.
  Eigen::MatrixXd G = r.vectors.transpose() * (sq.sys.M * r.vectors);
  CHECK((G - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("shift consistency") {
  MixedSquare sq(-1.0, 0.0, 2, 6);
  EigenResult base = smallest_eigenpairs(sq.sys, 2);
  AssembledSystem shifted = sq.sys;
  shifted.K = sq.sys.K + 3.5 * sq.sys.M;
  EigenResult sh = smallest_eigenpairs(shifted, 2);
  CHECK(sh.values[0] == doctest::Approx(base.values[0] + 3.5).epsilon(1e-10));
  CHECK(sh.values[1] == doctest::Approx(base.values[1] + 3.5).epsilon(1e-10));
}

TEST_CASE("deterministic given the seed") {
  MixedSquare sq(-1.0, 0.0, 2, 6);
  EigenResult a = smallest_eigenpairs(sq.sys, 2, 1e-10, 42);
  EigenResult b = smallest_eigenpairs(sq.sys, 2, 1e-10, 42);
  CHECK(a.values[0] == b.values[0]);
  CHECK((a.vectors - b.vectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.seed == 42);
}

TEST_CASE("sign normalization: Perron ground state") {
  Geometry2D g = Geometry2D::make(Guide2D::Broken, 3.0, true);
  Mesh m = build_guide_mesh(g, GradingSpec{2, 0.1}, 1);
  FeSpace s = make_space(m, 6);
  AssembledSystem sys = assemble(s, g.bc_map);
  EigenResult r = eigenvector_sign_normalize(smallest_eigenpairs(sys, 2), sys);
  // Idempotent, and flipping the input sign leaves the output unchanged.
  EigenResult flipped = r;
  flipped.vectors.col(0) *= -1.0;
  flipped = eigenvector_sign_normalize(flipped, sys);
  CHECK((flipped.vectors.col(0) - r.vectors.col(0)).cwiseAbs().maxCoeff() == 0.0);
  // All interior nodal values positive (ground state has no sign change).
  Eigen::VectorXd full = sys.extend_vec(r.vectors.col(0));
  int checked = 0;
  for (int i = 0; i < s.ndofs; ++i) {
    if (sys.free_of_full[i] < 0) continue;
    CHECK(full[i] > 0);
    ++checked;
  }
  CHECK(checked == sys.nfree);
  // Symmetric under x1 <-> x2.
  for (int i = 0; i < s.ndofs; ++i) {
    Eigen::Vector3d sw(s.dof_xyz[i][1], s.dof_xyz[i][0], 0);
    CHECK(fe_eval(s, full, sw) == doctest::Approx(full[i]).epsilon(1e-8));
  }
}

TEST_CASE("galerkin monotonicity in p") {
  Geometry2D g = Geometry2D::make(Guide2D::Broken, 2.0, true);
  Mesh m = build_guide_mesh(g, GradingSpec{2, 0.1}, 1);
  double prev[2] = {1e300, 1e300};
  for (int p : {2, 3, 4, 5, 6}) {
    FeSpace s = make_space(m, p);
    AssembledSystem sys = assemble(s, g.bc_map);
    EigenResult r = smallest_eigenpairs(sys, 2);
    CHECK(r.values[0] <= prev[0] + 1e-12);
    CHECK(r.values[1] <= prev[1] + 1e-12);
    prev[0] = r.values[0];
    prev[1] = r.values[1];
  }
}

TEST_CASE("broken second eigenvalue lower bound pi^2") {
  Geometry2D g = Geometry2D::make(Guide2D::Broken, 4.0, true);
  Mesh m = build_guide_mesh(g, GradingSpec{3, 0.1}, 1);
  FeSpace s = make_space(m, 8);
  AssembledSystem sys = assemble(s, g.bc_map);
  EigenResult r = smallest_eigenpairs(sys, 2);
  CHECK(r.values[0] < PI2);           // bound state below the threshold
  CHECK(r.values[1] >= PI2 - 1e-6);   // second Rayleigh quotient above pi^2
}

TEST_CASE("invalid requests are rejected") {
  MixedSquare sq(-1.0, 0.0, 1, 2);
  CHECK_THROWS(smallest_eigenpairs(sq.sys, 0));
  CHECK_THROWS(smallest_eigenpairs(sq.sys, sq.sys.nfree + 1));
}
