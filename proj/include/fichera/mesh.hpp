#pragma once

// Meshes: corner-graded tensor grids for the guide/layer family, plus the
// transfinite quarter-disk patch of the rounded guide.  Quads in 2D,
// axis-parallel hexes in 3D, intervals in 1D.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fichera/geometry.hpp"

namespace fichera {

enum class MappingKind { Affine, Bilinear, PolarArc };

// Edge of a 2D element: straight segment between its corner nodes, or a
// circular arc parameterized affinely in the angle.
struct ArcEdge {
  bool is_arc = false;
  double cx = 0, cy = 0, radius = 1, th0 = 0, th1 = 0;
};

struct Element {
  std::array<int, 8> v{};  // corner nodes, lexicographic (x fastest)
  int nv = 4;
  MappingKind kind = MappingKind::Affine;
  int region = 0;
  std::array<ArcEdge, 4> edges{};  // 2D only; face order below
};

// 2D faces: 0 bottom (v0,v1), 1 right (v1,v3), 2 top (v2,v3), 3 left (v0,v2).
// 3D faces: 0 x-, 1 x+, 2 y-, 3 y+, 4 z-, 5 z+.
struct Facet {
  int elem = -1;
  int face = -1;
  std::string tag;
};

struct Mesh {
  int dim = 2;
  std::vector<Eigen::Vector3d> nodes;
  std::vector<Element> elements;
  std::vector<Facet> facets;

  // Tensor-grid metadata (empty for the rounded guide): axis coordinates
  // per dimension and the element index of each grid cell (-1 = removed).
  std::array<std::vector<double>, 3> axis;
  std::vector<int> cell_elem;

  int cell_index(int i, int j, int k = 0) const {
    int nx = int(axis[0].size()) - 1;
    int ny = dim >= 2 ? int(axis[1].size()) - 1 : 1;
    return i + nx * (j + ny * k);
  }
};

inline std::vector<int> facet_corner_nodes(const Mesh& m, const Facet& f) {
  const Element& e = m.elements[f.elem];
  if (m.dim == 1) return {e.v[f.face]};
  if (m.dim == 2) {
    static const int fc2[4][2] = {{0, 1}, {1, 3}, {2, 3}, {0, 2}};
    return {e.v[fc2[f.face][0]], e.v[fc2[f.face][1]]};
  }
  static const int fc3[6][4] = {{0, 2, 4, 6}, {1, 3, 5, 7}, {0, 1, 4, 5},
                                {2, 3, 6, 7}, {0, 1, 2, 3}, {4, 5, 6, 7}};
  std::vector<int> out(4);
  for (int i = 0; i < 4; ++i) out[i] = e.v[fc3[f.face][i]];
  return out;
}

// ---------------------------------------------------------------------------
// Element geometric mapping.

struct MapEval {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  Eigen::Matrix3d J = Eigen::Matrix3d::Identity();  // dx_i / dxi_j
  double detJ = 1.0;
};

namespace detail {

inline Eigen::Vector2d edge_point(const Mesh& m, const Element& e, int face,
                                  int a, int b, double t, Eigen::Vector2d* dt) {
  const ArcEdge& ae = e.edges[face];
  if (ae.is_arc) {
    double th = ae.th0 + t * (ae.th1 - ae.th0);
    Eigen::Vector2d p(ae.cx + ae.radius * std::cos(th),
                      ae.cy + ae.radius * std::sin(th));
    if (dt)
      *dt = ae.radius * (ae.th1 - ae.th0) *
            Eigen::Vector2d(-std::sin(th), std::cos(th));
    return p;
  }
  Eigen::Vector2d pa = m.nodes[e.v[a]].head<2>();
  Eigen::Vector2d pb = m.nodes[e.v[b]].head<2>();
  if (dt) *dt = pb - pa;
  return pa + t * (pb - pa);
}

}  // namespace detail

// Map reference coordinates xi in [-1,1]^dim to physical space.
inline MapEval map_eval(const Mesh& m, int elem, const Eigen::Vector3d& xi) {
  const Element& e = m.elements[elem];
  MapEval out;
  if (e.kind == MappingKind::Affine) {
    // Axis-parallel box: diagonal Jacobian.
    const Eigen::Vector3d& lo = m.nodes[e.v[0]];
    const Eigen::Vector3d& hi = m.nodes[e.v[e.nv - 1]];
    for (int d = 0; d < m.dim; ++d) {
      out.x[d] = 0.5 * (lo[d] + hi[d]) + 0.5 * (hi[d] - lo[d]) * xi[d];
      out.J(d, d) = 0.5 * (hi[d] - lo[d]);
    }
    out.detJ = 1.0;
    for (int d = 0; d < m.dim; ++d) out.detJ *= out.J(d, d);
    return out;
  }
  // Transfinite (Coons) quad: boundary curves are the four edges.
  double u = 0.5 * (xi[0] + 1.0), v = 0.5 * (xi[1] + 1.0);
  Eigen::Vector2d dcb, dct, dcl, dcr;
  Eigen::Vector2d cb = detail::edge_point(m, e, 0, 0, 1, u, &dcb);
  Eigen::Vector2d ct = detail::edge_point(m, e, 2, 2, 3, u, &dct);
  Eigen::Vector2d cl = detail::edge_point(m, e, 3, 0, 2, v, &dcl);
  Eigen::Vector2d cr = detail::edge_point(m, e, 1, 1, 3, v, &dcr);
  Eigen::Vector2d p00 = m.nodes[e.v[0]].head<2>(), p10 = m.nodes[e.v[1]].head<2>();
  Eigen::Vector2d p01 = m.nodes[e.v[2]].head<2>(), p11 = m.nodes[e.v[3]].head<2>();
  Eigen::Vector2d F = (1 - v) * cb + v * ct + (1 - u) * cl + u * cr -
                      ((1 - u) * (1 - v) * p00 + u * (1 - v) * p10 +
                       (1 - u) * v * p01 + u * v * p11);
  Eigen::Vector2d Fu = (1 - v) * dcb + v * dct - cl + cr -
                       (-(1 - v) * p00 + (1 - v) * p10 - v * p01 + v * p11);
  Eigen::Vector2d Fv = -cb + ct + (1 - u) * dcl + u * dcr -
                       (-(1 - u) * p00 - u * p10 + (1 - u) * p01 + u * p11);
  out.x.head<2>() = F;
  out.J(0, 0) = 0.5 * Fu[0];
  out.J(1, 0) = 0.5 * Fu[1];
  out.J(0, 1) = 0.5 * Fv[0];
  out.J(1, 1) = 0.5 * Fv[1];
  out.detJ = out.J(0, 0) * out.J(1, 1) - out.J(0, 1) * out.J(1, 0);
  return out;
}

// ---------------------------------------------------------------------------
// 1D subdivisions.

namespace detail {

inline void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(),
                      [](double a, double b) { return std::abs(a - b) < 1e-12; }),
          v.end());
}

}  // namespace detail

// Points of [0,1] with `base` uniform cells and `grading.layers` geometric
// layers accumulating at 0.
inline std::vector<double> graded_unit_axis(int base, const GradingSpec& g) {
  g.validate();
  if (base < 1) throw std::invalid_argument("base must be >= 1");
  std::vector<double> pts;
  for (int k = 0; k <= base; ++k) pts.push_back(double(k) / base);
  double w = 1.0 / base;
  for (int j = 1; j <= g.layers; ++j) pts.push_back(w * std::pow(g.ratio, j));
  detail::sort_unique(pts);
  return pts;
}

// Points of [-1, R] for the broken guide: uniform cells of width 1/base
// away from the corner, geometric layers on both sides of 0.
inline std::vector<double> graded_guide_axis(double R, int base, const GradingSpec& g) {
  g.validate();
  if (base < 1) throw std::invalid_argument("base must be >= 1");
  double w = 1.0 / base;
  if (R < w - 1e-12)
    throw std::invalid_argument("arm too short for the requested base subdivision");
  std::vector<double> pts;
  for (int k = 0; k <= base; ++k) pts.push_back(-1.0 + double(k) / base);
  for (int j = 1; j <= g.layers; ++j) {
    pts.push_back(-w * std::pow(g.ratio, j));
    pts.push_back(w * std::pow(g.ratio, j));
  }
  int m = std::max(1, int(std::llround((R - w) * base)));
  for (int k = 0; k <= m; ++k) pts.push_back(w + (R - w) * double(k) / m);
  detail::sort_unique(pts);
  return pts;
}

// Layer subdivisions S_k of [-1, R]: S_1 as listed, S_{k+1} adds midpoints.
inline std::vector<double> layer_subdivision(double R, int level) {
  if (R < 2.0) throw std::invalid_argument("layer subdivision requires R >= 2");
  if (level < 1 || level > 3) throw std::invalid_argument("subdivision level must be 1..3");
  std::vector<double> pts = {-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0, (R + 2.0) / 2.0, R};
  detail::sort_unique(pts);
  for (int r = 1; r < level; ++r) {
    std::vector<double> refined;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      refined.push_back(pts[i]);
      refined.push_back(0.5 * (pts[i] + pts[i + 1]));
    }
    refined.push_back(pts.back());
    pts = refined;
  }
  return pts;
}

// Subdivision of [-1, Rt] for the scaled layer (before the 1/2 scaling).
inline std::vector<double> scaled_layer_subdivision(double Rt, int level) {
  if (Rt <= 0.1) throw std::invalid_argument("scaled layer requires R > 0.05");
  double a = std::min(4.0, Rt), b = std::max(a, Rt);
  std::vector<double> pts = {-1.0, -0.1, 0.0, 0.1, std::min(1.0, Rt), a, b};
  detail::sort_unique(pts);
  for (int r = 1; r < level; ++r) {
    std::vector<double> refined;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      refined.push_back(pts[i]);
      refined.push_back(0.5 * (pts[i] + pts[i + 1]));
    }
    refined.push_back(pts.back());
    pts = refined;
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Tensor-product builders.

namespace detail {

// 2D grid on xs x ys keeping cells where `active(i,j)`; boundary facets
// tagged by `tag(axis, fixed coordinate, other-coordinate center)`.
inline Mesh build_tensor_2d(
    const std::vector<double>& xs, const std::vector<double>& ys,
    const std::function<bool(int, int)>& active,
    const std::function<std::string(int, double, double)>& tag,
    const std::function<int(double, double)>& region = nullptr) {
  Mesh m;
  m.dim = 2;
  m.axis[0] = xs;
  m.axis[1] = ys;
  int nx = int(xs.size()) - 1, ny = int(ys.size()) - 1;
  std::vector<int> node_id((nx + 1) * (ny + 1), -1);
  auto vid = [&](int i, int j) -> int& { return node_id[i + (nx + 1) * j]; };
  m.cell_elem.assign(nx * ny, -1);
  auto is_active = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < nx && j < ny && active(i, j);
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!active(i, j)) continue;
      Element e;
      int c = 0;
      for (int dj = 0; dj <= 1; ++dj)
        for (int di = 0; di <= 1; ++di) {
          int& id = vid(i + di, j + dj);
          if (id < 0) {
            id = int(m.nodes.size());
            m.nodes.emplace_back(xs[i + di], ys[j + dj], 0.0);
          }
          e.v[c++] = id;
        }
      e.nv = 4;
      if (region)
        e.region = region(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
      m.cell_elem[m.cell_index(i, j)] = int(m.elements.size());
      m.elements.push_back(e);
      // Boundary facets: faces whose neighbor cell is absent.
      struct FaceNbr { int di, dj, face, ax; };
      const FaceNbr nbrs[4] = {{0, -1, 0, 1}, {1, 0, 1, 0}, {0, 1, 2, 1}, {-1, 0, 3, 0}};
      for (const auto& nb : nbrs) {
        if (is_active(i + nb.di, j + nb.dj)) continue;
        Facet f;
        f.elem = m.cell_elem[m.cell_index(i, j)];
        f.face = nb.face;
        double fixed = (nb.ax == 0) ? xs[i + (nb.di > 0 ? 1 : 0)]
                                    : ys[j + (nb.dj > 0 ? 1 : 0)];
        double center = (nb.ax == 0) ? 0.5 * (ys[j] + ys[j + 1])
                                     : 0.5 * (xs[i] + xs[i + 1]);
        f.tag = tag(nb.ax, fixed, center);
        m.facets.push_back(f);
      }
    }
  return m;
}

inline Mesh build_tensor_3d(
    const std::vector<double>& xs, const std::vector<double>& ys,
    const std::vector<double>& zs,
    const std::function<bool(int, int, int)>& active,
    const std::function<std::string(int, double, const Eigen::Vector2d&)>& tag) {
  Mesh m;
  m.dim = 3;
  m.axis[0] = xs;
  m.axis[1] = ys;
  m.axis[2] = zs;
  int nx = int(xs.size()) - 1, ny = int(ys.size()) - 1, nz = int(zs.size()) - 1;
  std::vector<int> node_id((nx + 1) * (ny + 1) * (nz + 1), -1);
  auto vid = [&](int i, int j, int k) -> int& {
    return node_id[i + (nx + 1) * (j + (ny + 1) * k)];
  };
  m.cell_elem.assign(nx * ny * nz, -1);
  auto is_active = [&](int i, int j, int k) {
    return i >= 0 && j >= 0 && k >= 0 && i < nx && j < ny && k < nz && active(i, j, k);
  };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (!active(i, j, k)) continue;
        Element e;
        e.nv = 8;
        int c = 0;
        for (int dk = 0; dk <= 1; ++dk)
          for (int dj = 0; dj <= 1; ++dj)
            for (int di = 0; di <= 1; ++di) {
              int& id = vid(i + di, j + dj, k + dk);
              if (id < 0) {
                id = int(m.nodes.size());
                m.nodes.emplace_back(xs[i + di], ys[j + dj], zs[k + dk]);
              }
              e.v[c++] = id;
            }
        int eidx = int(m.elements.size());
        m.cell_elem[m.cell_index(i, j, k)] = eidx;
        m.elements.push_back(e);
        struct FaceNbr { int d[3]; int face, ax; };
        const FaceNbr nbrs[6] = {{{-1, 0, 0}, 0, 0}, {{1, 0, 0}, 1, 0},
                                 {{0, -1, 0}, 2, 1}, {{0, 1, 0}, 3, 1},
                                 {{0, 0, -1}, 4, 2}, {{0, 0, 1}, 5, 2}};
        int idx[3] = {i, j, k};
        const std::vector<double>* ax[3] = {&xs, &ys, &zs};
        for (const auto& nb : nbrs) {
          if (is_active(i + nb.d[0], j + nb.d[1], k + nb.d[2])) continue;
          Facet f;
          f.elem = eidx;
          f.face = nb.face;
          double fixed = (*ax[nb.ax])[idx[nb.ax] + (nb.d[nb.ax] > 0 ? 1 : 0)];
          Eigen::Vector2d ctr;
          int c2 = 0;
          for (int d = 0; d < 3; ++d)
            if (d != nb.ax)
              ctr[c2++] = 0.5 * ((*ax[d])[idx[d]] + (*ax[d])[idx[d] + 1]);
          f.tag = tag(nb.ax, fixed, ctr);
          m.facets.push_back(f);
        }
      }
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Domain-specific builders.

inline Mesh build_interval_mesh(const std::vector<double>& pts,
                                const std::string& left_tag = "left",
                                const std::string& right_tag = "right") {
  Mesh m;
  m.dim = 1;
  m.axis[0] = pts;
  for (double p : pts) m.nodes.emplace_back(p, 0.0, 0.0);
  m.cell_elem.resize(pts.size() - 1);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Element e;
    e.nv = 2;
    e.v[0] = int(i);
    e.v[1] = int(i + 1);
    m.cell_elem[i] = int(i);
    m.elements.push_back(e);
  }
  m.facets.push_back({0, 0, left_tag});
  m.facets.push_back({int(m.elements.size()) - 1, 1, right_tag});
  return m;
}

// Uniform n x n mesh of the square (a,b)^2; sides tagged xmin/xmax/ymin/ymax.
inline Mesh build_square_mesh(double a, double b, int n) {
  std::vector<double> pts;
  for (int k = 0; k <= n; ++k) pts.push_back(a + (b - a) * double(k) / n);
  auto tag = [&](int ax, double fixed, double) -> std::string {
    bool lo = std::abs(fixed - a) < 1e-12;
    if (ax == 0) return lo ? "xmin" : "xmax";
    return lo ? "ymin" : "ymax";
  };
  return detail::build_tensor_2d(pts, pts, [](int, int) { return true; }, tag);
}

// Broken guide: [-1,R]^2 minus [0,R]^2.  Scaled variant is the half-scaled
// guide of arm 2R (arms of width 1/2, reentrant corner still at the origin).
inline Mesh build_guide_mesh(const Geometry2D& geom, const GradingSpec& grading,
                             int base) {
  if (geom.kind == Guide2D::Rounded)
    throw std::invalid_argument("rounded guide uses build_rounded_guide_mesh");
  const bool scaled = (geom.kind == Guide2D::ScaledBroken);
  double R = geom.arm_length;
  if (R <= 0) throw std::invalid_argument("arm_length must be positive");
  std::vector<double> ax = graded_guide_axis(scaled ? 2.0 * R : R, base, grading);
  if (scaled)
    for (double& x : ax) x *= 0.5;
  const double Rend = ax.back();
  auto active = [&](int i, int j) { return ax[i] < -1e-12 || ax[j] < -1e-12; };
  auto tag = [&](int axdir, double fixed, double center) -> std::string {
    if (std::abs(fixed - Rend) < 1e-12 && center < 0)
      return axdir == 0 ? "sigma1" : "sigma2";
    if (!scaled) return "wall";
    return std::abs(fixed - (-0.5)) < 1e-12 ? "outer" : "inner";
  };
  Mesh m = detail::build_tensor_2d(ax, ax, active, tag);
  return m;
}

// Reference guide mesh (R = 1) with region tags for the weighted form:
// 0 on the corner square, 1 on the x-arm, 2 on the y-arm.
inline Mesh build_reference_guide_mesh(const GradingSpec& grading, int base) {
  std::vector<double> ax = graded_guide_axis(1.0, base, grading);
  auto active = [&](int i, int j) { return ax[i] < -1e-12 || ax[j] < -1e-12; };
  auto tag = [&](int axdir, double fixed, double center) -> std::string {
    if (std::abs(fixed - 1.0) < 1e-12 && center < 0)
      return axdir == 0 ? "sigma1" : "sigma2";
    return "wall";
  };
  auto region = [](double cx, double cy) -> int {
    if (cx > 0) return 1;
    if (cy > 0) return 2;
    return 0;
  };
  return detail::build_tensor_2d(ax, ax, active, tag, region);
}

// Fichera layer [-1,R]^3 minus [0,R]^3 on the tensor grid S_k; scaled
// variant is the half-scaled layer of arm 2R.
inline Mesh build_layer_grid(const Geometry3D& geom) {
  const bool scaled = (geom.kind == Layer3D::ScaledFichera);
  double R = geom.arm_length;
  std::vector<double> ax;
  if (scaled) {
    ax = scaled_layer_subdivision(2.0 * R, geom.subdivision_level);
    for (double& x : ax) x *= 0.5;
  } else {
    ax = layer_subdivision(R, geom.subdivision_level);
  }
  const double Rend = ax.back();
  auto active = [&](int i, int j, int k) {
    return ax[i] < -1e-12 || ax[j] < -1e-12 || ax[k] < -1e-12;
  };
  auto tag = [&](int axdir, double fixed, const Eigen::Vector2d&) -> std::string {
    if (std::abs(fixed - Rend) < 1e-12)
      return std::string("sigma") + char('1' + axdir);
    if (!scaled) return "wall";
    return std::abs(fixed - (-0.5)) < 1e-12 ? "outer" : "inner";
  };
  return detail::build_tensor_3d(ax, ax, ax, active, tag);
}

// ---------------------------------------------------------------------------
// Rounded guide: quarter disk of radius 1 in the third quadrant plus two
// strips of width 1 and length R, meshed conformally.

namespace detail {

struct NodePool {
  std::vector<Eigen::Vector3d> nodes;
  std::unordered_map<uint64_t, int> index;

  static uint64_t key(int64_t qx, int64_t qy) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(uint64_t(qx));
    mix(uint64_t(qy));
    return h;
  }

  int add(double x, double y) {
    const double q = 1e10;
    int64_t qx = std::llround(x * q), qy = std::llround(y * q);
    for (int64_t dx = -1; dx <= 1; ++dx)
      for (int64_t dy = -1; dy <= 1; ++dy) {
        auto it = index.find(key(qx + dx, qy + dy));
        if (it != index.end() &&
            std::abs(nodes[it->second][0] - x) < 5e-10 &&
            std::abs(nodes[it->second][1] - y) < 5e-10)
          return it->second;
      }
    int id = int(nodes.size());
    nodes.emplace_back(x, y, 0.0);
    index.emplace(key(qx, qy), id);
    return id;
  }
};

}  // namespace detail

namespace detail {

// Quarter disk of radius 1 in the third quadrant: macro patch with corner A
// at the origin, straight edges A->D ((-1,0) x {0}) and A->B (the segment
// {0} x (-1,0)), and the arc split at its midpoint E so the patch has four
// genuine corners.  Orientation: u runs A->D, v runs A->B (right-handed in
// the plane).  Facets are emitted on the arc and, when tags are given, on
// the two straight segments.
inline void add_sector_elements(Mesh& m, NodePool& pool,
                                const std::vector<double>& u,
                                const char* arc_tag,
                                const char* seg1_tag = nullptr,
                                const char* seg2_tag = nullptr) {
  const Eigen::Vector2d A(0, 0), B(0, -1), D(-1, 0);
  const double thB = -M_PI / 2, thE = -0.75 * M_PI;
  const double thD = M_PI, thE2 = thE + 2 * M_PI;  // D-side branch of the arc
  const int nu = int(u.size()) - 1;

  // Macro map: bottom A->D, right D->E (arc), top B->E (arc), left A->B.
  auto macro = [&](double uu, double vv) -> Eigen::Vector2d {
    Eigen::Vector2d cb = A + uu * (D - A);
    Eigen::Vector2d cl = A + vv * (B - A);
    double thr = thD + vv * (thE2 - thD);
    Eigen::Vector2d cr(std::cos(thr), std::sin(thr));
    double tht = thB + uu * (thE - thB);
    Eigen::Vector2d ct(std::cos(tht), std::sin(tht));
    return (1 - vv) * cb + vv * ct + (1 - uu) * cl + uu * cr -
           ((1 - uu) * (1 - vv) * A + uu * (1 - vv) * D + (1 - uu) * vv * B +
            uu * vv * Eigen::Vector2d(std::cos(thE), std::sin(thE)));
  };

  // Sector sub-elements: bilinear quads, except that edges lying on the
  // outer arc are kept as exact circle arcs.
  for (int j = 0; j < nu; ++j)
    for (int i = 0; i < nu; ++i) {
      Element e;
      Eigen::Vector2d p00 = macro(u[i], u[j]), p10 = macro(u[i + 1], u[j]);
      Eigen::Vector2d p01 = macro(u[i], u[j + 1]), p11 = macro(u[i + 1], u[j + 1]);
      e.v[0] = pool.add(p00[0], p00[1]);
      e.v[1] = pool.add(p10[0], p10[1]);
      e.v[2] = pool.add(p01[0], p01[1]);
      e.v[3] = pool.add(p11[0], p11[1]);
      e.kind = MappingKind::Bilinear;
      if (i + 1 == nu) {  // right edge on the arc D->E
        e.edges[1].is_arc = true;
        e.edges[1].radius = 1.0;
        e.edges[1].th0 = thD + u[j] * (thE2 - thD);
        e.edges[1].th1 = thD + u[j + 1] * (thE2 - thD);
        e.kind = MappingKind::PolarArc;
      }
      if (j + 1 == nu) {  // top edge on the arc B->E
        e.edges[2].is_arc = true;
        e.edges[2].radius = 1.0;
        e.edges[2].th0 = thB + u[i] * (thE - thB);
        e.edges[2].th1 = thB + u[i + 1] * (thE - thB);
        e.kind = MappingKind::PolarArc;
      }
      int eidx = int(m.elements.size());
      m.elements.push_back(e);
      if (i + 1 == nu) m.facets.push_back({eidx, 1, arc_tag});
      if (j + 1 == nu) m.facets.push_back({eidx, 2, arc_tag});
      if (seg1_tag && i == 0) m.facets.push_back({eidx, 3, seg1_tag});
      if (seg2_tag && j == 0) m.facets.push_back({eidx, 0, seg2_tag});
    }
}

}  // namespace detail

// Standalone quarter disk with straight segments tagged "seg1" (on the x2
// axis) and "seg2" (on the x1 axis) and the curved boundary tagged "arc".
inline Mesh build_sector_mesh(const GradingSpec& grading, int base) {
  grading.validate();
  Mesh m;
  m.dim = 2;
  detail::NodePool pool;
  std::vector<double> u = graded_unit_axis(base, grading);
  detail::add_sector_elements(m, pool, u, "arc", "seg1", "seg2");
  m.nodes = pool.nodes;
  return m;
}

inline Mesh build_rounded_guide_mesh(double R, const GradingSpec& grading, int base) {
  if (R <= 0) throw std::invalid_argument("arm_length must be positive");
  grading.validate();
  Mesh m;
  m.dim = 2;
  detail::NodePool pool;
  std::vector<double> u = graded_unit_axis(base, grading);
  const int nu = int(u.size()) - 1;
  detail::add_sector_elements(m, pool, u, "wall");

  // Strips.  Transverse subdivisions are the images of the graded u-list,
  // so nodes match the sector boundary exactly.  Longitudinal axis 0..R,
  // graded toward the junction at 0 (the reentrant corner).
  std::vector<double> lng;
  {
    double w = 1.0 / base;
    for (int j = 1; j <= grading.layers; ++j)
      lng.push_back(w * std::pow(grading.ratio, j));
    lng.push_back(0.0);
    int mcells = std::max(1, int(std::llround((R - w) * base)));
    for (int k = 0; k <= mcells; ++k) lng.push_back(w + (R - w) * double(k) / mcells);
    detail::sort_unique(lng);
  }
  std::vector<double> trans;  // -1..0, graded toward 0
  for (int i = nu; i >= 0; --i) trans.push_back(-u[i]);

  auto add_strip = [&](bool xstrip) {
    const std::vector<double>& sx = xstrip ? lng : trans;
    const std::vector<double>& sy = xstrip ? trans : lng;
    int nx = int(sx.size()) - 1, ny = int(sy.size()) - 1;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        Element e;
        e.v[0] = pool.add(sx[i], sy[j]);
        e.v[1] = pool.add(sx[i + 1], sy[j]);
        e.v[2] = pool.add(sx[i], sy[j + 1]);
        e.v[3] = pool.add(sx[i + 1], sy[j + 1]);
        e.kind = MappingKind::Affine;
        int eidx = int(m.elements.size());
        m.elements.push_back(e);
        if (xstrip) {
          if (j == 0) m.facets.push_back({eidx, 0, "wall"});
          if (j == ny - 1) m.facets.push_back({eidx, 2, "wall"});
          if (i == nx - 1) m.facets.push_back({eidx, 1, "sigma1"});
        } else {
          if (i == 0) m.facets.push_back({eidx, 3, "wall"});
          if (i == nx - 1) m.facets.push_back({eidx, 1, "wall"});
          if (j == ny - 1) m.facets.push_back({eidx, 2, "sigma2"});
        }
      }
  };
  add_strip(true);
  add_strip(false);
  m.nodes = pool.nodes;
  return m;
}

// ---------------------------------------------------------------------------
// Plain-text dump: header `dim nnodes nelems nfacets`, then nodes,
// elements (mapping code + node ids), facets (tag + node ids).
inline std::string dump_mesh(const Mesh& m) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "%d %zu %zu %zu\n", m.dim, m.nodes.size(),
                m.elements.size(), m.facets.size());
  out += buf;
  for (const auto& n : m.nodes) {
    for (int d = 0; d < m.dim; ++d) {
      std::snprintf(buf, sizeof buf, "%s%.17g", d ? " " : "", n[d]);
      out += buf;
    }
    out += '\n';
  }
  for (const auto& e : m.elements) {
    std::snprintf(buf, sizeof buf, "%d", int(e.kind));
    out += buf;
    for (int i = 0; i < e.nv; ++i) {
      std::snprintf(buf, sizeof buf, " %d", e.v[i]);
      out += buf;
    }
    out += '\n';
  }
  for (const auto& f : m.facets) {
    out += f.tag;
    for (int id : facet_corner_nodes(m, f)) {
      std::snprintf(buf, sizeof buf, " %d", id);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace fichera
