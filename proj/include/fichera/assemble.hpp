#pragma once

// Assembly of sparse stiffness/mass pencils: Kronecker products on
// axis-parallel elements, quadrature loops on transfinite ones.  Supports
// per-region anisotropic weights (the R-parameterized reference form) and
// inhomogeneous Dirichlet lifting for the Helmholtz extension problem.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cstdio>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fichera/geometry.hpp"
#include "fichera/space.hpp"

namespace fichera {

// Per-region gradient/mass coefficients.  Region absent from the map means
// unit weights.
struct WeightSpec {
  std::map<int, std::pair<Eigen::Vector3d, double>> w;

  std::pair<Eigen::Vector3d, double> get(int region) const {
    auto it = w.find(region);
    if (it != w.end()) return it->second;
    return {Eigen::Vector3d::Ones(), 1.0};
  }

  // Weighted form equivalent to the plain Dirichlet form on the guide of
  // arm length R, assembled on the fixed reference mesh (regions: 0 corner
  // square, 1 x-arm, 2 y-arm).
  static WeightSpec reference_guide(double R) {
    if (R <= 0) throw std::invalid_argument("R must be positive");
    WeightSpec s;
    s.w[0] = {Eigen::Vector3d(1, 1, 1), 1.0};
    s.w[1] = {Eigen::Vector3d(1.0 / R, R, 1), R};
    s.w[2] = {Eigen::Vector3d(R, 1.0 / R, 1), R};
    return s;
  }
};

struct AssembledSystem {
  Eigen::SparseMatrix<double> K, M;  // restricted to free dofs
  std::vector<int> free_of_full;     // ndofs entries, -1 where constrained
  std::vector<int> full_of_free;
  int nfree = 0;
  bool has_full = false;
  Eigen::SparseMatrix<double> Kfull, Mfull;  // only when keep_full

  Eigen::VectorXd restrict_vec(const Eigen::VectorXd& full) const {
    Eigen::VectorXd out(nfree);
    for (int i = 0; i < nfree; ++i) out[i] = full[full_of_free[i]];
    return out;
  }
  Eigen::VectorXd extend_vec(const Eigen::VectorXd& free) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(free_of_full.size());
    for (int i = 0; i < nfree; ++i) out[full_of_free[i]] = free[i];
    return out;
  }
};

namespace detail {

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

// Element stiffness/mass for an axis-parallel box with per-direction
// gradient weights and a mass weight.
inline void element_matrices_affine(const FeSpace& s, int e,
                                    const Eigen::Vector3d& wg, double wm,
                                    Eigen::MatrixXd& Ke, Eigen::MatrixXd& Me) {
  const Mesh& m = *s.mesh;
  const Element& el = m.elements[e];
  const Eigen::Vector3d& lo = m.nodes[el.v[0]];
  const Eigen::Vector3d& hi = m.nodes[el.v[el.nv - 1]];
  double h[3] = {1, 1, 1};
  for (int d = 0; d < s.dim; ++d) h[d] = 0.5 * (hi[d] - lo[d]);
  const Eigen::MatrixXd& Mr = s.basis.mass_ref;
  const Eigen::MatrixXd& Sr = s.basis.stiff_ref;
  if (s.dim == 1) {
    Ke = wg[0] / h[0] * Sr;
    Me = wm * h[0] * Mr;
  } else if (s.dim == 2) {
    Ke = wg[0] * (h[1] / h[0]) * kron(Mr, Sr) + wg[1] * (h[0] / h[1]) * kron(Sr, Mr);
    Me = wm * h[0] * h[1] * kron(Mr, Mr);
  } else {
    Ke = wg[0] * (h[1] * h[2] / h[0]) * kron(Mr, kron(Mr, Sr)) +
         wg[1] * (h[0] * h[2] / h[1]) * kron(Mr, kron(Sr, Mr)) +
         wg[2] * (h[0] * h[1] / h[2]) * kron(Sr, kron(Mr, Mr));
    Me = wm * h[0] * h[1] * h[2] * kron(Mr, kron(Mr, Mr));
  }
}

// Quadrature-loop element matrices for bilinear / arc-blended 2D elements.
inline void element_matrices_mapped(const FeSpace& s, int e,
                                    Eigen::MatrixXd& Ke, Eigen::MatrixXd& Me) {
  const Basis1D& b = s.basis;
  const int n = b.p + 1, nd = n * n, nq = b.nq;
  Ke.setZero(nd, nd);
  Me.setZero(nd, nd);
  Eigen::VectorXd val(nd);
  Eigen::MatrixXd grad(nd, 2);
  for (int qj = 0; qj < nq; ++qj)
    for (int qi = 0; qi < nq; ++qi) {
      MapEval g = map_eval(*s.mesh, e, {b.qpts[qi], b.qpts[qj], 0});
      if (g.detJ <= 0) throw std::runtime_error("nonpositive Jacobian in element");
      Eigen::Matrix2d Jinv = g.J.topLeftCorner<2, 2>().inverse();
      double w = b.qwts[qi] * b.qwts[qj] * g.detJ;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          int a = i + n * j;
          val[a] = b.val_q(i, qi) * b.val_q(j, qj);
          double gx = b.der_q(i, qi) * b.val_q(j, qj);
          double gy = b.val_q(i, qi) * b.der_q(j, qj);
          grad(a, 0) = Jinv(0, 0) * gx + Jinv(1, 0) * gy;
          grad(a, 1) = Jinv(0, 1) * gx + Jinv(1, 1) * gy;
        }
      Ke.noalias() += w * (grad * grad.transpose());
      Me.noalias() += w * (val * val.transpose());
    }
}

}  // namespace detail

inline AssembledSystem assemble(const FeSpace& s, const BCMap& bc,
                                const WeightSpec* weights = nullptr,
                                bool keep_full = false) {
  const Mesh& m = *s.mesh;
  const int nd = s.dofs_per_elem();
  std::vector<Eigen::Triplet<double>> tk, tm;
  tk.reserve(m.elements.size() * nd * nd);
  tm.reserve(m.elements.size() * nd * nd);
  Eigen::MatrixXd Ke, Me;
  for (int e = 0; e < int(m.elements.size()); ++e) {
    const Element& el = m.elements[e];
    if (el.kind == MappingKind::Affine) {
      Eigen::Vector3d wg = Eigen::Vector3d::Ones();
      double wm = 1.0;
      if (weights) {
        auto [g, mm] = weights->get(el.region);
        wg = g;
        wm = mm;
      }
      detail::element_matrices_affine(s, e, wg, wm, Ke, Me);
    } else {
      if (weights && weights->w.count(el.region))
        throw std::invalid_argument("weighted assembly supports affine elements only");
      detail::element_matrices_mapped(s, e, Ke, Me);
    }
    const std::vector<int>& ed = s.edofs[e];
    for (int a = 0; a < nd; ++a)
      for (int bx = 0; bx < nd; ++bx) {
        tk.emplace_back(ed[a], ed[bx], Ke(a, bx));
        tm.emplace_back(ed[a], ed[bx], Me(a, bx));
      }
  }

  AssembledSystem sys;
  Eigen::SparseMatrix<double> Kfull(s.ndofs, s.ndofs), Mfull(s.ndofs, s.ndofs);
  Kfull.setFromTriplets(tk.begin(), tk.end());
  tk.clear();
  tk.shrink_to_fit();
  Mfull.setFromTriplets(tm.begin(), tm.end());
  tm.clear();
  tm.shrink_to_fit();

  // Constrained dofs from Dirichlet facets.
  std::vector<char> constrained(s.ndofs, 0);
  for (const Facet& f : m.facets) {
    auto it = bc.find(f.tag);
    if (it == bc.end())
      throw std::invalid_argument("facet tag without boundary condition: " + f.tag);
    if (it->second != BC::Dirichlet) continue;
    for (int li : face_dof_indices(s.dim, s.p, f.face))
      constrained[s.edofs[f.elem][li]] = 1;
  }
  sys.free_of_full.assign(s.ndofs, -1);
  for (int i = 0; i < s.ndofs; ++i)
    if (!constrained[i]) {
      sys.free_of_full[i] = int(sys.full_of_free.size());
      sys.full_of_free.push_back(i);
    }
  sys.nfree = int(sys.full_of_free.size());

  // Restrict to free dofs.
  auto restrict_mat = [&](const Eigen::SparseMatrix<double>& A) {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(A.nonZeros());
    for (int c = 0; c < A.outerSize(); ++c) {
      int fc = sys.free_of_full[c];
      if (fc < 0) continue;
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it) {
        int fr = sys.free_of_full[it.row()];
        if (fr >= 0) t.emplace_back(fr, fc, it.value());
      }
    }
    Eigen::SparseMatrix<double> R(sys.nfree, sys.nfree);
    R.setFromTriplets(t.begin(), t.end());
    return R;
  };
  sys.K = restrict_mat(Kfull);
  sys.M = restrict_mat(Mfull);
  if (keep_full) {
    sys.has_full = true;
    sys.Kfull = std::move(Kfull);
    sys.Mfull = std::move(Mfull);
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Inhomogeneous Helmholtz extension: (K - shift*M) u = 0 with u = g on the
// Dirichlet boundary, imposed by nodal interpolation and lifting.

inline Eigen::VectorXd solve_helmholtz(const FeSpace& s, const AssembledSystem& sys,
                                       double shift,
                                       const std::function<double(const Eigen::Vector3d&)>& g) {
  if (!sys.has_full)
    throw std::invalid_argument("helmholtz solve needs the full matrices");
  Eigen::SparseMatrix<double> A = sys.Kfull - shift * sys.Mfull;
  Eigen::VectorXd lift = Eigen::VectorXd::Zero(s.ndofs);
  for (int i = 0; i < s.ndofs; ++i)
    if (sys.free_of_full[i] < 0) lift[i] = g(s.dof_xyz[i]);
  Eigen::VectorXd rhs_full = -(A * lift);
  Eigen::VectorXd rhs = sys.restrict_vec(rhs_full);
  Eigen::SparseMatrix<double> Aff = sys.K - shift * sys.M;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Aff);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("helmholtz factorization failed");
  // The operator must be positive definite below the first Dirichlet
  // eigenvalue; a negative pivot means the shift is too large.
  if (ldlt.vectorD().minCoeff() <= 0)
    throw std::runtime_error("helmholtz shift at or above the first eigenvalue");
  Eigen::VectorXd uf = ldlt.solve(rhs);
  return lift + sys.extend_vec(uf);
}

// ---------------------------------------------------------------------------
// Boundary integrals of a FE function over all facets with a given tag
// (2D meshes, axis-parallel elements).

enum class BoundaryIntegrand { TangentialGradSq, ValueSq, ValueTimesSecondNormal };

inline double boundary_quadrature(const FeSpace& s, const std::string& tag,
                                  const Eigen::VectorXd& u_full,
                                  BoundaryIntegrand which) {
  const Mesh& m = *s.mesh;
  if (m.dim != 2) throw std::invalid_argument("boundary quadrature is 2D only");
  const Basis1D& b = s.basis;
  const int n = s.p + 1, nq = b.nq;
  // Second-derivative values of the 1D basis at the endpoints.
  Eigen::MatrixXd D2 = b.diff * b.diff;
  bool found = false;
  double total = 0;
  for (const Facet& f : m.facets) {
    if (f.tag != tag) continue;
    found = true;
    const Element& el = m.elements[f.elem];
    if (el.kind != MappingKind::Affine)
      throw std::invalid_argument("boundary quadrature needs axis-parallel elements");
    const Eigen::Vector3d& lo = m.nodes[el.v[0]];
    const Eigen::Vector3d& hi = m.nodes[el.v[el.nv - 1]];
    int norm_ax = (f.face == 1 || f.face == 3) ? 0 : 1;
    int tan_ax = 1 - norm_ax;
    int fixed_idx = (f.face == 1 || f.face == 2) ? s.p : 0;
    double ht = 0.5 * (hi[tan_ax] - lo[tan_ax]);
    double hn = 0.5 * (hi[norm_ax] - lo[norm_ax]);
    const std::vector<int>& ed = s.edofs[f.elem];
    auto lidx = [&](int it, int in) {  // tensor index from (tangential, normal)
      return norm_ax == 0 ? in + n * it : it + n * in;
    };
    for (int q = 0; q < nq; ++q) {
      double v = 0, dv = 0, d2n = 0;
      for (int it = 0; it < n; ++it) {
        double phi = b.val_q(it, q), dphi = b.der_q(it, q);
        v += u_full[ed[lidx(it, fixed_idx)]] * phi;
        dv += u_full[ed[lidx(it, fixed_idx)]] * dphi;
        if (which == BoundaryIntegrand::ValueTimesSecondNormal)
          for (int in = 0; in < n; ++in)
            d2n += u_full[ed[lidx(it, in)]] * phi * D2(in, fixed_idx);
      }
      double w = b.qwts[q] * ht;
      switch (which) {
        case BoundaryIntegrand::TangentialGradSq:
          total += w * (dv / ht) * (dv / ht);
          break;
        case BoundaryIntegrand::ValueSq:
          total += w * v * v;
          break;
        case BoundaryIntegrand::ValueTimesSecondNormal:
          total += w * v * d2n / (hn * hn);
          break;
      }
    }
  }
  if (!found) throw std::invalid_argument("no facet carries tag: " + tag);
  return total;
}

// Coordinate-format text export (row, col, value; 0-based).
inline std::string export_matrix(const Eigen::SparseMatrix<double>& A) {
  std::string out;
  char buf[128];
  for (int c = 0; c < A.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", long(it.row()), long(it.col()),
                    it.value());
      out += buf;
    }
  return out;
}

}  // namespace fichera
