#pragma once

// One-dimensional reduction: lowest eigenvalue mu(L) of -q'' + V(x) q on
// (L, R_trunc) with a natural (Neumann) condition at L and a selectable far
// condition, where V is the transverse-mode curve. Also the crossing point
// L* of mu and V, the closed-form derivative of mu, and the Bargmann bound.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fichera/assemble.hpp"
#include "fichera/curve.hpp"
#include "fichera/eigensolve.hpp"
#include "fichera/geometry.hpp"
#include "fichera/lagrange.hpp"

namespace fichera {

struct SturmProblem {
  double L = -0.5;
  double R_trunc = 40.0;
  BC far_bc = BC::Neumann;
  std::function<double(double)> potential;  // defined on (L, R_trunc]
  int degree = 10;
  // Abscissae where the potential is only C^1 (interpolation breakpoints);
  // they are inserted as mesh nodes so per-cell quadrature stays spectral.
  std::vector<double> kinks;

  static SturmProblem from_curve(const LambdaCurve& curve, double L) {
    SturmProblem p;
    p.L = L;
    p.potential = [&curve](double x) { return curve.value(x); };
    for (const auto& s : curve.samples) p.kinks.push_back(s.x3);
    return p;
  }
};

struct SturmResult {
  double mu = 0;
  Eigen::VectorXd q;  // nodal values on the 1D mesh, L2-normalized, q(L) > 0
  double q_at_L = 0;
};

namespace detail {

// Cell boundaries: fine uniform cells left of 0, geometrically growing cells
// to the right, and a node placed exactly at 0 where the potential kinks.
inline std::vector<double> sturm_breakpoints(double L, double Rt,
                                             const std::vector<double>& kinks) {
  if (!(L > -1.0) || !(L < Rt)) throw std::invalid_argument("need -1 < L < R_trunc");
  std::vector<double> pts{L};
  if (L < 0) {
    int n = std::max(2, int(std::ceil((std::min(0.0, Rt) - L) / 0.05)));
    double b = std::min(0.0, Rt);
    for (int i = 1; i <= n; ++i) pts.push_back(L + (b - L) * i / double(n));
  }
  double x = pts.back(), h = 0.1;
  while (x < Rt - 1e-12) {
    x = std::min(x + h, Rt);
    pts.push_back(x);
    h = std::min(2 * h, 1.0);
  }
  for (double k : kinks)
    if (k > L + 1e-12 && k < Rt - 1e-12) pts.push_back(k);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out{pts.front()};
  for (double v : pts)
    if (v - out.back() > 1e-9) out.push_back(v);
  return out;
}

}  // namespace detail

inline SturmResult solve_sturm(const SturmProblem& prob) {
  if (!prob.potential) throw std::invalid_argument("potential not set");
  std::vector<double> pts =
      detail::sturm_breakpoints(prob.L, prob.R_trunc, prob.kinks);
  const int p = prob.degree;
  Basis1D basis = Basis1D::make(p, p + 6);
  const int ncell = int(pts.size()) - 1;
  const int ndofs = ncell * p + 1;
  const int n = (prob.far_bc == BC::Dirichlet) ? ndofs - 1 : ndofs;

  std::vector<Eigen::Triplet<double>> tk, tm;
  for (int e = 0; e < ncell; ++e) {
    double h = pts[e + 1] - pts[e];
    int off = e * p;
    Eigen::MatrixXd Ae = (2.0 / h) * basis.stiff_ref;
    Eigen::MatrixXd Be = (h / 2.0) * basis.mass_ref;
    for (int iq = 0; iq < basis.nq; ++iq) {
      double x = pts[e] + 0.5 * h * (basis.qpts[iq] + 1.0);
      double w = 0.5 * h * basis.qwts[iq] * prob.potential(x);
      Ae += w * basis.val_q.col(iq) * basis.val_q.col(iq).transpose();
    }
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p; ++j) {
        if (off + i >= n || off + j >= n) continue;
        tk.emplace_back(off + i, off + j, Ae(i, j));
        tm.emplace_back(off + i, off + j, Be(i, j));
      }
  }
  AssembledSystem sys;
  sys.nfree = n;
  sys.K.resize(n, n);
  sys.M.resize(n, n);
  sys.K.setFromTriplets(tk.begin(), tk.end());
  sys.M.setFromTriplets(tm.begin(), tm.end());
  sys.free_of_full.assign(ndofs, -1);
  for (int i = 0; i < n; ++i) {
    sys.free_of_full[i] = i;
    sys.full_of_free.push_back(i);
  }

  EigenResult res = smallest_eigenpairs(sys, 1, 1e-12);
  SturmResult out;
  out.mu = res.values[0];
  out.q = Eigen::VectorXd::Zero(ndofs);
  out.q.head(n) = res.vectors.col(0);  // already L2(M)-normalized
  if (out.q[0] < 0) out.q = -out.q;
  out.q_at_L = out.q[0];
  return out;
}

struct MuSample {
  double L = 0, mu = 0, q_at_L = 0, lambda_at_L = 0;
};

inline std::vector<MuSample> mu_curve(const LambdaCurve& curve,
                                      const std::vector<double>& Ls,
                                      const SturmProblem& tmpl = {}) {
  std::vector<MuSample> out;
  for (double L : Ls) {
    SturmProblem prob = tmpl;
    prob.L = L;
    prob.potential = [&curve](double x) { return curve.value(x); };
    prob.kinks.clear();
    for (const auto& smp : curve.samples) prob.kinks.push_back(smp.x3);
    SturmResult r = solve_sturm(prob);
    out.push_back({L, r.mu, r.q_at_L, curve.value(L)});
  }
  return out;
}

// Closed form mu'(L) = (mu(L) - lambda(L)) q_L(L)^2.
inline double mu_derivative(const LambdaCurve& curve, double L,
                            const SturmProblem& tmpl = {}) {
  if (L == 0.0)
    throw std::invalid_argument("potential is not differentiable at 0");
  SturmProblem prob = tmpl;
  prob.L = L;
  prob.potential = [&curve](double x) { return curve.value(x); };
  prob.kinks.clear();
  for (const auto& smp : curve.samples) prob.kinks.push_back(smp.x3);
  SturmResult r = solve_sturm(prob);
  return (r.mu - curve.value(L)) * r.q_at_L * r.q_at_L;
}

struct LstarResult {
  double L_star = 0;
  double mu_star = 0;
  double bracket = 0;  // final bisection interval width
};

// Bisection on sign(mu(L) - lambda(L)) over (-1, 0): negative near -1,
// positive near 0; the crossing realizes min_L mu(L).
inline LstarResult find_Lstar(const LambdaCurve& curve, double tol = 1e-4,
                              const SturmProblem& tmpl = {}) {
  auto diff = [&](double L) {
    SturmProblem prob = tmpl;
    prob.L = L;
    prob.potential = [&curve](double x) { return curve.value(x); };
    prob.kinks.clear();
    for (const auto& smp : curve.samples) prob.kinks.push_back(smp.x3);
    return solve_sturm(prob).mu - curve.value(L);
  };
  double a = -0.9, b = -1e-3;
  double fa = diff(a), fb = diff(b);
  while (fa > 0 && a > -0.99) {
    a = -1 + 0.5 * (1 + a);
    fa = diff(a);
  }
  if (!(fa < 0 && fb > 0))
    throw std::runtime_error("mu - lambda does not change sign on (-1, 0)");
  while (b - a > tol) {
    double m = 0.5 * (a + b);
    (diff(m) < 0 ? a : b) = m;
  }
  LstarResult out;
  out.L_star = 0.5 * (a + b);
  out.bracket = b - a;
  SturmProblem prob = tmpl;
  prob.L = out.L_star;
  prob.potential = [&curve](double x) { return curve.value(x); };
  prob.kinks.clear();
  for (const auto& smp : curve.samples) prob.kinks.push_back(smp.x3);
  out.mu_star = solve_sturm(prob).mu;
  return out;
}

// 1 + 2 * int_L^inf t exp(-2 omega (t - L0)) dt in closed form.
inline double bargmann_bound(double omega, double L, double L0) {
  if (!(omega > 0)) throw std::invalid_argument("omega must be positive");
  return 1.0 + 2.0 * std::exp(2 * omega * (L0 - L)) *
                   (L / (2 * omega) + 1.0 / (4 * omega * omega));
}

}  // namespace fichera
