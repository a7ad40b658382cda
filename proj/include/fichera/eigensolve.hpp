#pragma once

// Smallest eigenpairs of the generalized symmetric pencil (K, M):
// shift-invert (at zero) block Krylov iteration with full M-reorthogonal-
// ization and Rayleigh-Ritz extraction.  The block start vector makes
// degenerate pairs (multiplicity up to the block size) reliable, and the
// Krylov acceleration copes with the clustered spectra of long guides.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <random>
#include <stdexcept>

#include "fichera/assemble.hpp"

namespace fichera {

struct EigenResult {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXd vectors;    // M-orthonormal columns (free-dof length)
  Eigen::VectorXd residuals;  // ||K v - lambda M v|| / ||M v||
  int iterations = 0;         // Krylov block steps taken
  uint64_t seed = 0;
};

inline EigenResult smallest_eigenpairs(const AssembledSystem& sys, int count,
                                       double tol = 1e-10, uint64_t seed = 20240901,
                                       int max_subspace = 500) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  const int nf = sys.nfree;
  if (nf < count) throw std::invalid_argument("fewer free dofs than requested pairs");
  const int blk = std::min(nf, count + 1);
  const int cap = std::min(nf, std::max(max_subspace, 4 * blk));

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sys.K);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("stiffness factorization failed");

  // Attainable residual floor: rounding in K*x alone contributes about
  // eps*||K||*||x||, which on strongly graded meshes exceeds tol*|lambda|.
  double kdiag_max = 0;
  for (int i = 0; i < nf; ++i) kdiag_max = std::max(kdiag_max, sys.K.coeff(i, i));
  const double eps_floor = 100.0 * 2.2e-16 * kdiag_max;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::MatrixXd V(nf, cap);   // M-orthonormal basis
  Eigen::MatrixXd H(cap, cap);  // V^T K V
  H.setZero();
  int dim = 0;

  // M-orthonormalize w against the current basis (two Gram-Schmidt passes)
  // and append; on breakdown substitute a fresh random direction.
  auto append = [&](Eigen::VectorXd w) -> bool {
    for (int attempt = 0; attempt < 3; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd Mw = sys.M * w;
        if (dim > 0) w -= V.leftCols(dim) * (V.leftCols(dim).transpose() * Mw);
      }
      double beta = std::sqrt(w.dot(sys.M * w));
      if (beta > 1e-10) {
        V.col(dim) = w / beta;
        Eigen::VectorXd Kv = sys.K * V.col(dim);
        for (int i = 0; i <= dim; ++i) {
          double h = V.col(i).dot(Kv);
          H(i, dim) = h;
          H(dim, i) = h;
        }
        ++dim;
        return true;
      }
      for (int i = 0; i < nf; ++i) w[i] = gauss(rng);
    }
    return false;
  };

  for (int j = 0; j < blk && dim < cap; ++j) {
    Eigen::VectorXd w(nf);
    for (int i = 0; i < nf; ++i) w[i] = gauss(rng);
    append(std::move(w));
  }

  EigenResult out;
  out.seed = seed;
  Eigen::MatrixXd X;
  for (int step = 1;; ++step) {
    out.iterations = step;
    int lo = std::max(0, dim - blk);
    int nb = dim - lo;
    Eigen::MatrixXd W = ldlt.solve(sys.M * V.middleCols(lo, nb));
    for (int j = 0; j < nb && dim < cap; ++j) append(W.col(j));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.topLeftCorner(dim, dim));
    int take = std::min(count, dim);
    X = V.leftCols(dim) * es.eigenvectors().leftCols(take);
    out.values = es.eigenvalues().head(take);
    out.residuals.resize(take);
    bool done = (take == count);
    for (int j = 0; j < take; ++j) {
      Eigen::VectorXd Mx = sys.M * X.col(j);
      Eigen::VectorXd r = sys.K * X.col(j) - out.values[j] * Mx;
      double mn = Mx.norm();
      out.residuals[j] = r.norm() / mn;
      double limit = std::max(tol * std::max(1.0, std::abs(out.values[j])),
                              eps_floor * X.col(j).norm() / mn);
      if (out.residuals[j] > limit) done = false;
    }
    if (done) break;
    if (dim >= cap)
      throw std::runtime_error("eigensolver did not converge within the subspace budget");
  }
  out.vectors = X;
  return out;
}

// Refine a converged simple eigenpair by inverse iteration with a shift just
// below the current value.  Each step multiplies the eigenvector error by
// |lambda - sigma| / gap, and the Rayleigh quotient error is quadratic in the
// vector error, so one or two steps reach rounding level.  Useful when a
// downstream quantity (e.g. a finite difference) divides eigenvalue noise by
// a small number.
inline double rayleigh_polish(const AssembledSystem& sys, Eigen::VectorXd x,
                              double lam, int iters = 2) {
  for (int it = 0; it < iters; ++it) {
    double sigma = lam * (1.0 - 1e-8) - 1e-14;
    Eigen::SparseMatrix<double> A = sys.K - sigma * sys.M;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success) break;
    Eigen::VectorXd y = ldlt.solve(sys.M * x);
    double ny = std::sqrt(y.dot(sys.M * y));
    if (!(ny > 0) || !std::isfinite(ny)) break;
    x = y / ny;
    lam = x.dot(sys.K * x);
  }
  return lam;
}

// Perron convention for the ground state: scale so the M-weighted mean is
// positive.  Idempotent; requires a simple first eigenvalue.
inline EigenResult eigenvector_sign_normalize(EigenResult res,
                                              const AssembledSystem& sys) {
  if (res.values.size() >= 2 &&
      (res.values[1] - res.values[0]) <= 1e-8 * std::abs(res.values[0]))
    throw std::runtime_error("first eigenvalue is degenerate; sign convention undefined");
  double mean = (sys.M * res.vectors.col(0)).sum();
  if (mean < 0) res.vectors.col(0) *= -1.0;
  return res;
}

}  // namespace fichera
