#pragma once

// Eigenvalue computations on the planar guides and the 3D layer:
//  - weighted reference-domain solver (one mesh reused for every length R),
//  - curve sweep producing a LambdaCurve,
//  - Dirichlet/mixed bracketing pairs for guides and layers,
//  - separated-variable tail expansion of the ground state in the arm,
//  - dissipation-rate functional d(lambda)/dR from boundary traces.

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "fichera/assemble.hpp"
#include "fichera/curve.hpp"
#include "fichera/eigensolve.hpp"
#include "fichera/geometry.hpp"
#include "fichera/mesh.hpp"
#include "fichera/space.hpp"

namespace fichera {

struct Discretization {
  int p = 16;
  GradingSpec grading{4, 0.1};
  int base = 1;
  double tol = 1e-10;
  std::uint64_t seed = 20240901ull;

  std::string mesh_id() const {
    return "ref-b" + std::to_string(base) + "-l" + std::to_string(grading.layers);
  }
};

// Solves eigenproblems on the broken guide of arbitrary arm length R by
// assembling a weighted form on the fixed reference domain (R = 1 mesh).
class ReferenceGuide {
 public:
  explicit ReferenceGuide(const Discretization& disc = {}) : disc_(disc) {
    mesh_ = std::make_unique<Mesh>(
        build_reference_guide_mesh(disc.grading, disc.base));
    space_ = std::make_unique<FeSpace>(make_space(*mesh_, disc.p));
  }

  const FeSpace& space() const { return *space_; }
  const Discretization& disc() const { return disc_; }

  // Smallest eigenpairs of the guide of arm length R; mixed = natural
  // (Neumann) condition on the two far ends, otherwise Dirichlet there.
  EigenResult solve(double R, bool mixed, int count = 1,
                    AssembledSystem* sys_out = nullptr) const {
    if (!(R > 0)) throw std::invalid_argument("arm length must be positive");
    BCMap bc{{"wall", BC::Dirichlet},
             {"sigma1", mixed ? BC::Neumann : BC::Dirichlet},
             {"sigma2", mixed ? BC::Neumann : BC::Dirichlet}};
    WeightSpec w = WeightSpec::reference_guide(R);
    AssembledSystem sys = assemble(*space_, bc, &w);
    EigenResult res = smallest_eigenpairs(sys, count, disc_.tol, disc_.seed);
    if (sys_out) *sys_out = std::move(sys);
    return res;
  }

 private:
  Discretization disc_;
  std::unique_ptr<Mesh> mesh_;
  std::unique_ptr<FeSpace> space_;
};

// lambda(x3): closed form on (-1,0], weighted mixed solve for x3 > 0.
inline double lambda_of(double x3, const ReferenceGuide& guide) {
  if (x3 <= 0) return LambdaCurve::closed_form(x3);
  return guide.solve(x3, /*mixed=*/true).values[0];
}

inline std::vector<double> log_spaced(double a, double b, int n) {
  if (!(a > 0 && b > a) || n < 2) throw std::invalid_argument("bad range");
  std::vector<double> out(n);
  double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(la + (lb - la) * i / double(n - 1));
  return out;
}

// Samples the mixed branch at the given abscissae (default: 60 log-spaced
// points on [0.001, 10]) and pins the limit from a Dirichlet/mixed pair at
// the largest abscissa.
inline LambdaCurve sweep_lambda(const ReferenceGuide& guide,
                                std::vector<double> abscissae = {}) {
  if (abscissae.empty()) abscissae = log_spaced(1e-3, 10.0, 60);
  LambdaCurve curve;
  for (double x3 : abscissae) {
    LambdaSample s;
    s.x3 = x3;
    s.lambda = guide.solve(x3, true).values[0];
    s.p = guide.disc().p;
    s.mesh_id = guide.disc().mesh_id();
    curve.samples.push_back(s);
  }
  double R = abscissae.back();
  double dir = guide.solve(R, false).values[0];
  curve.finalize(dir, curve.samples.back().lambda);
  return curve;
}

// Dirichlet/mixed pair on the broken guide via the weighted route.
inline std::pair<EigenResult, EigenResult> dirichlet_mixed_pair(
    const ReferenceGuide& guide, double R, int count = 1) {
  return {guide.solve(R, false, count), guide.solve(R, true, count)};
}

// Dirichlet/mixed pair on an explicitly meshed planar guide (rounded or
// scaled variants; also works for the broken guide as a cross-check).
inline std::pair<EigenResult, EigenResult> dirichlet_mixed_pair(
    const Geometry2D& geom, double R, const Discretization& disc,
    int count = 1) {
  Mesh m = geom.kind == Guide2D::Rounded
               ? build_rounded_guide_mesh(R, disc.grading, disc.base)
               : build_guide_mesh(Geometry2D::make(geom.kind, R, true),
                                  disc.grading, disc.base);
  FeSpace s = make_space(m, disc.p);
  auto solve_with = [&](bool mixed) {
    BCMap bc = Geometry2D::make(geom.kind, R, mixed).bc_map;
    AssembledSystem sys = assemble(s, bc);
    return smallest_eigenpairs(sys, count, disc.tol, disc.seed);
  };
  return {solve_with(false), solve_with(true)};
}

// Dirichlet/mixed pair on the 3D layer at polynomial degree p.
inline std::pair<EigenResult, EigenResult> dirichlet_mixed_pair(
    const Geometry3D& geom, const Discretization& disc, int count = 1) {
  Mesh m = build_layer_grid(geom);
  FeSpace s = make_space(m, disc.p);
  auto solve_with = [&](bool mixed) {
    BCMap bc = Geometry3D::make(geom.kind, geom.arm_length,
                                geom.subdivision_level, mixed)
                   .bc_map;
    AssembledSystem sys = assemble(s, bc);
    return smallest_eigenpairs(sys, count, disc.tol, disc.seed);
  };
  return {solve_with(false), solve_with(true)};
}

// ---------------------------------------------------------------------------
// Separated-variable representation of the mixed ground state in one arm:
//   v(x1,x2) = sum_k g_k * c_k(x1) * s_k(x2),  s_k(x2) = sqrt(2) sin(k pi (x2+1)),
//   c_k(x1) = cosh((R-x1) w_k) / cosh(R w_k),  w_k = sqrt(k^2 pi^2 - lambda).
// Valid for x1 in (0, R), x2 in (-1, 0). Dirichlet at x2 = -1, 0 and Neumann
// at x1 = R hold termwise.

struct SeriesSolution {
  std::vector<double> g;  // modal trace coefficients g_1..g_K
  double lambda = 0;
  double R = 0;
};

inline SeriesSolution series_from_fem(const FeSpace& s,
                                      const Eigen::VectorXd& u_full, double R,
                                      double lambda, int K_max = 30) {
  if (s.mesh->dim != 2) throw std::invalid_argument("planar spaces only");
  SeriesSolution sol;
  sol.lambda = lambda;
  sol.R = R;
  sol.g.assign(K_max, 0.0);
  // Composite Gauss quadrature of v(0, x2) s_k(x2) over x2 in (-1, 0), using
  // the mesh's own transverse subdivision so the trace is smooth per cell.
  QuadRule q = gauss_legendre(s.p + 6);
  const auto& ax = s.mesh->axis[1];
  for (size_t c = 0; c + 1 < ax.size(); ++c) {
    double a = std::max(ax[c], -1.0), b = std::min(ax[c + 1], 0.0);
    if (!(b > a)) continue;
    for (int iq = 0; iq < q.points.size(); ++iq) {
      double x2 = 0.5 * (a + b) + 0.5 * (b - a) * q.points[iq];
      double w = 0.5 * (b - a) * q.weights[iq];
      double v = fe_eval(s, u_full, Eigen::Vector3d(0.0, x2, 0.0));
      for (int k = 1; k <= K_max; ++k)
        sol.g[k - 1] += w * v * std::sqrt(2.0) * std::sin(k * M_PI * (x2 + 1));
    }
  }
  return sol;
}

// Evaluates d^l/dx1^l d^m/dx2^m of the series at (x1, x2).
inline double series_eval(const SeriesSolution& sol, double x1, double x2,
                          int l = 0, int m = 0) {
  double out = 0;
  for (size_t i = 0; i < sol.g.size(); ++i) {
    int k = int(i) + 1;
    double w = std::sqrt(k * k * M_PI * M_PI - sol.lambda);
    // Overflow-safe ratio: cosh((R-x1)w)/cosh(Rw) and the sinh analogue.
    double e1 = std::exp(-x1 * w);
    double e2 = std::exp(-2 * (sol.R - x1) * w);
    double eR = std::exp(-2 * sol.R * w);
    double ratio = (l % 2 == 0) ? e1 * (1 + e2) / (1 + eR)
                                : e1 * (1 - e2) / (1 + eR);
    double axial = std::pow(-w, l) * ratio;
    double trans = std::sqrt(2.0) * std::pow(k * M_PI, m) *
                   std::sin(k * M_PI * (x2 + 1) + 0.5 * m * M_PI);
    out += sol.g[i] * axial * trans;
  }
  return out;
}

// d(lambda_1)/dR of the mixed problem at arm length R, from the boundary
// identity  lambda'(R) = sum_ends int ( |grad_tau v|^2 - lambda |v|^2 ) ds
// with v the L2-normalized ground state.
inline double eigen_derivative(const Geometry2D& geom, double R,
                               const Discretization& disc,
                               double* lambda_out = nullptr) {
  Mesh m = build_guide_mesh(Geometry2D::make(geom.kind, R, true), disc.grading,
                            disc.base);
  FeSpace s = make_space(m, disc.p);
  BCMap bc = Geometry2D::make(geom.kind, R, true).bc_map;
  AssembledSystem sys = assemble(s, bc);
  EigenResult res = smallest_eigenpairs(sys, 1, disc.tol, disc.seed);
  Eigen::VectorXd u = sys.extend_vec(res.vectors.col(0));
  double lam = res.values[0];
  if (lambda_out) *lambda_out = lam;
  double out = 0;
  for (const char* tag : {"sigma1", "sigma2"}) {
    out += boundary_quadrature(s, tag, u, BoundaryIntegrand::TangentialGradSq);
    out -= lam * boundary_quadrature(s, tag, u, BoundaryIntegrand::ValueSq);
  }
  return out;
}

// Same formula evaluated on the weighted reference solve.  The arm stretch
// x1 -> R x1 leaves the far-end traces, their tangential derivatives and the
// transverse boundary measure unchanged, so the boundary integral can be
// taken directly on the reference mesh; this puts the formula and a finite
// difference of solve(R, ...) on the same discrete family.
inline double eigen_derivative(const ReferenceGuide& guide, double R,
                               double* lambda_out = nullptr) {
  AssembledSystem sys;
  EigenResult res = guide.solve(R, /*mixed=*/true, 1, &sys);
  Eigen::VectorXd u = sys.extend_vec(res.vectors.col(0));
  double lam = res.values[0];
  if (lambda_out) *lambda_out = lam;
  double out = 0;
  for (const char* tag : {"sigma1", "sigma2"}) {
    out += boundary_quadrature(guide.space(), tag, u,
                               BoundaryIntegrand::TangentialGradSq);
    out -= lam * boundary_quadrature(guide.space(), tag, u,
                                     BoundaryIntegrand::ValueSq);
  }
  return out;
}

}  // namespace fichera
