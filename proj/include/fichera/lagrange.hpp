#pragma once

// Lagrange basis of degree p on Gauss-Lobatto nodes of [-1,1], with
// tabulated values/derivatives at Gauss quadrature points and the
// reference 1D mass/stiffness matrices.

#include <Eigen/Dense>

#include "fichera/quadrature.hpp"

namespace fichera {

struct Basis1D {
  int p = 0;                 // polynomial degree
  Eigen::VectorXd nodes;     // p+1 Gauss-Lobatto nodes
  Eigen::VectorXd bary;      // barycentric weights
  int nq = 0;                // quadrature point count
  Eigen::VectorXd qpts, qwts;
  Eigen::MatrixXd val_q;     // (p+1) x nq: phi_i(q_j)
  Eigen::MatrixXd der_q;     // (p+1) x nq: phi_i'(q_j)
  Eigen::MatrixXd diff;      // (p+1) x (p+1) nodal differentiation matrix
  Eigen::MatrixXd mass_ref;  // int phi_i phi_j
  Eigen::MatrixXd stiff_ref; // int phi_i' phi_j'

  // Evaluate all basis functions (and optionally 1st/2nd derivatives) at x.
  void eval_at(double x, Eigen::VectorXd* val, Eigen::VectorXd* der = nullptr,
               Eigen::VectorXd* der2 = nullptr) const {
    const int n = p + 1;
    if (val) val->resize(n);
    if (der) der->resize(n);
    if (der2) der2->resize(n);

    // Snap to a node: barycentric formulas are singular there, but the
    // differentiation matrix gives exact derivatives.
    for (int k = 0; k < n; ++k) {
      if (std::abs(x - nodes[k]) < 1e-13) {
        if (val) { val->setZero(); (*val)[k] = 1.0; }
        if (der) *der = diff.col(k);
        if (der2) *der2 = (diff * diff).col(k);
        return;
      }
    }

    // phi_i(x) = L(x) * bary_i / (x - x_i), L(x) = prod (x - x_k).
    double s0 = 0, s1 = 0, s2 = 0;  // sums of r_i, r_i/(x-x_i), r_i/(x-x_i)^2
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
      double d = x - nodes[i];
      r[i] = bary[i] / d;
      s0 += r[i];
      s1 += r[i] / d;
      s2 += r[i] / (d * d);
    }
    // With W(x) = sum_k r_k, phi_i = r_i / W.  Using r_i' = -r_i/(x-x_i),
    // r_i'' = 2 r_i/(x-x_i)^2, W' = -s1, W'' = 2 s2:
    // phi' = r'/W - phi W'/W,
    // phi'' = r''/W - 2 (r'/W)(W'/W) - phi W''/W + 2 phi (W'/W)^2.
    const double Wp_over_W = -s1 / s0;
    const double Wpp_over_W = 2.0 * s2 / s0;
    for (int i = 0; i < n; ++i) {
      double d = x - nodes[i];
      double f = r[i] / s0;
      if (val) (*val)[i] = f;
      double rp_over_W = -f / d;
      if (der) (*der)[i] = rp_over_W - f * Wp_over_W;
      if (der2) {
        (*der2)[i] = 2.0 * f / (d * d) - 2.0 * rp_over_W * Wp_over_W -
                     f * Wpp_over_W + 2.0 * f * Wp_over_W * Wp_over_W;
      }
    }
  }

  // nq defaults to p+2 (exact mass up to the nodal layout's needs).
  static Basis1D make(int p, int nq = -1) {
    Basis1D b;
    b.p = p;
    const int n = p + 1;
    b.nodes = gauss_lobatto_nodes(n);
    b.bary.resize(n);
    for (int i = 0; i < n; ++i) {
      double w = 1.0;
      for (int k = 0; k < n; ++k)
        if (k != i) w *= (b.nodes[i] - b.nodes[k]);
      b.bary[i] = 1.0 / w;
    }
    // Nodal differentiation matrix: diff(i,j) = phi_i'(x_j).
    b.diff.resize(n, n);
    for (int j = 0; j < n; ++j) {
      double rowsum = 0;
      for (int i = 0; i < n; ++i) {
        if (i != j) {
          b.diff(i, j) = (b.bary[i] / b.bary[j]) / (b.nodes[j] - b.nodes[i]);
          rowsum += b.diff(i, j);
        }
      }
      b.diff(j, j) = -rowsum;
    }

    b.nq = (nq > 0) ? nq : p + 2;
    QuadRule q = gauss_legendre(b.nq);
    b.qpts = q.points;
    b.qwts = q.weights;
    b.val_q.resize(n, b.nq);
    b.der_q.resize(n, b.nq);
    Eigen::VectorXd v, d;
    for (int j = 0; j < b.nq; ++j) {
      b.eval_at(b.qpts[j], &v, &d);
      b.val_q.col(j) = v;
      b.der_q.col(j) = d;
    }
    b.mass_ref = b.val_q * b.qwts.asDiagonal() * b.val_q.transpose();
    b.stiff_ref = b.der_q * b.qwts.asDiagonal() * b.der_q.transpose();
    return b;
  }
};

}  // namespace fichera
