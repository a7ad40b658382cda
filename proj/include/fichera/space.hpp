#pragma once

// Tensor-product Lagrange FE space on a mesh: global dof numbering by
// geometric deduplication of mapped Gauss-Lobatto nodes.

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "fichera/lagrange.hpp"
#include "fichera/mesh.hpp"

namespace fichera {

namespace detail {

struct DofPool {
  std::vector<Eigen::Vector3d> xyz;
  std::unordered_map<uint64_t, int> index;

  static uint64_t key(int64_t a, int64_t b, int64_t c) {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t v : {uint64_t(a), uint64_t(b), uint64_t(c)}) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }

  // Distinct dofs are separated by much more than the quantum, so probing
  // the adjacent quantization cells makes the lookup rounding-proof.
  int add(const Eigen::Vector3d& p) {
    const double q = 1e10;
    int64_t qx = std::llround(p[0] * q), qy = std::llround(p[1] * q),
            qz = std::llround(p[2] * q);
    for (int64_t dx = -1; dx <= 1; ++dx)
      for (int64_t dy = -1; dy <= 1; ++dy)
        for (int64_t dz = -1; dz <= 1; ++dz) {
          auto it = index.find(key(qx + dx, qy + dy, qz + dz));
          if (it != index.end() && (xyz[it->second] - p).cwiseAbs().maxCoeff() < 5e-10)
            return it->second;
        }
    int id = int(xyz.size());
    xyz.push_back(p);
    index.emplace(key(qx, qy, qz), id);
    return id;
  }
};

}  // namespace detail

struct FeSpace {
  const Mesh* mesh = nullptr;
  Basis1D basis;
  int dim = 2, p = 1, ndofs = 0;
  std::vector<std::vector<int>> edofs;  // per element, tensor order (x fastest)
  std::vector<Eigen::Vector3d> dof_xyz;

  int dofs_per_elem() const {
    int n = basis.p + 1, r = n;
    for (int d = 1; d < dim; ++d) r *= n;
    return r;
  }
};

inline FeSpace make_space(const Mesh& m, int p, int nq = -1) {
  FeSpace s;
  s.mesh = &m;
  s.dim = m.dim;
  s.p = p;
  s.basis = Basis1D::make(p, nq);
  const int n = p + 1;
  detail::DofPool pool;
  s.edofs.resize(m.elements.size());
  Eigen::Vector3d xi = Eigen::Vector3d::Zero();
  for (int e = 0; e < int(m.elements.size()); ++e) {
    std::vector<int>& ed = s.edofs[e];
    ed.reserve(s.dofs_per_elem());
    int nk = (s.dim == 3) ? n : 1, nj = (s.dim >= 2) ? n : 1;
    for (int k = 0; k < nk; ++k)
      for (int j = 0; j < nj; ++j)
        for (int i = 0; i < n; ++i) {
          xi[0] = s.basis.nodes[i];
          if (s.dim >= 2) xi[1] = s.basis.nodes[j];
          if (s.dim == 3) xi[2] = s.basis.nodes[k];
          ed.push_back(pool.add(map_eval(m, e, xi).x));
        }
  }
  s.dof_xyz = pool.xyz;
  s.ndofs = int(pool.xyz.size());
  return s;
}

// Local tensor indices of the dofs lying on a face.
inline std::vector<int> face_dof_indices(int dim, int p, int face) {
  const int n = p + 1;
  std::vector<int> out;
  if (dim == 1) return {face == 0 ? 0 : p};
  if (dim == 2) {
    // faces: 0 j=0, 1 i=p, 2 j=p, 3 i=0
    for (int t = 0; t < n; ++t) {
      switch (face) {
        case 0: out.push_back(t); break;
        case 1: out.push_back(p + n * t); break;
        case 2: out.push_back(t + n * p); break;
        case 3: out.push_back(n * t); break;
        default: throw std::invalid_argument("bad face");
      }
    }
    return out;
  }
  // 3D: 0 i=0, 1 i=p, 2 j=0, 3 j=p, 4 k=0, 5 k=p
  int fixed_axis = face / 2, fixed_idx = (face % 2) ? p : 0;
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) {
      int idx[3];
      int c = 0;
      for (int d = 0; d < 3; ++d)
        if (d != fixed_axis) idx[d] = (c++ == 0) ? a : b;
      idx[fixed_axis] = fixed_idx;
      out.push_back(idx[0] + n * (idx[1] + n * idx[2]));
    }
  return out;
}

// Evaluate a FE function (full-length dof vector) at a point of a tensor
// mesh.  `grad` optionally receives the physical gradient.
inline double fe_eval(const FeSpace& s, const Eigen::VectorXd& u,
                      const Eigen::Vector3d& x, Eigen::Vector3d* grad = nullptr) {
  const Mesh& m = *s.mesh;
  if (m.axis[0].empty())
    throw std::invalid_argument("point evaluation requires a tensor mesh");
  // Candidate intervals per axis: the containing one, plus the previous
  // one when the point sits on a cell boundary (so points on the rim of a
  // removed region still find an active cell).
  std::vector<int> cand[3] = {{0}, {0}, {0}};
  for (int d = 0; d < s.dim; ++d) {
    const std::vector<double>& ax = m.axis[d];
    if (x[d] < ax.front() - 1e-12 || x[d] > ax.back() + 1e-12)
      throw std::out_of_range("point outside mesh bounding box");
    auto it = std::upper_bound(ax.begin(), ax.end(), x[d]);
    int i = std::min(int(ax.size()) - 2, std::max(0, int(it - ax.begin()) - 1));
    cand[d] = {i};
    if (i > 0 && x[d] < ax[i] + 1e-12) cand[d].push_back(i - 1);
    if (i + 2 < int(ax.size()) && x[d] > ax[i + 1] - 1e-12) cand[d].push_back(i + 1);
  }
  int e = -1;
  for (int a : cand[0])
    for (int b : cand[s.dim >= 2 ? 1 : 0])
      for (int c : cand[s.dim == 3 ? 2 : 0]) {
        int probe = m.cell_elem[m.cell_index(a, s.dim >= 2 ? b : 0, s.dim == 3 ? c : 0)];
        if (probe >= 0) {
          e = probe;
          goto located;
        }
      }
located:
  if (e < 0) throw std::out_of_range("point lies in a removed cell");
  const Element& el = m.elements[e];
  const Eigen::Vector3d& lo = m.nodes[el.v[0]];
  const Eigen::Vector3d& hi = m.nodes[el.v[el.nv - 1]];
  Eigen::VectorXd val[3], der[3];
  double half[3];
  for (int d = 0; d < s.dim; ++d) {
    half[d] = 0.5 * (hi[d] - lo[d]);
    double xi = (x[d] - 0.5 * (lo[d] + hi[d])) / half[d];
    s.basis.eval_at(std::min(1.0, std::max(-1.0, xi)), &val[d], &der[d]);
  }
  const int n = s.p + 1;
  const std::vector<int>& ed = s.edofs[e];
  double result = 0;
  if (grad) grad->setZero();
  int nk = (s.dim == 3) ? n : 1, nj = (s.dim >= 2) ? n : 1;
  int c = 0;
  for (int k = 0; k < nk; ++k)
    for (int j = 0; j < nj; ++j)
      for (int i = 0; i < n; ++i, ++c) {
        double coeff = u[ed[c]];
        double vx = val[0][i];
        double vy = (s.dim >= 2) ? val[1][j] : 1.0;
        double vz = (s.dim == 3) ? val[2][k] : 1.0;
        result += coeff * vx * vy * vz;
        if (grad) {
          (*grad)[0] += coeff * der[0][i] / half[0] * vy * vz;
          if (s.dim >= 2) (*grad)[1] += coeff * vx * der[1][j] / half[1] * vz;
          if (s.dim == 3) (*grad)[2] += coeff * vx * vy * der[2][k] / half[2];
        }
      }
  return result;
}

}  // namespace fichera
