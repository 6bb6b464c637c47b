#pragma once
// Restart-free GMRES for dense complex systems. Arnoldi with classical
// Gram-Schmidt applied twice, Givens rotations for the least-squares
// problem. Stops when the estimated relative residual drops below tol.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace eddy {

struct GmresResult {
  Eigen::VectorXcd x;
  int iterations = 0;
  double estimated_residual = 0.0; // relative, from the Hessenberg recursion
  double true_residual = 0.0;      // relative, ||b - A x|| / ||b||
  bool converged = false;
  bool stagnated = false;
};

struct GmresOptions {
  double tol = 2.2e-16;
  int max_iter = 500;
};

using MatVec = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

inline GmresResult gmres(const MatVec& A, const Eigen::VectorXcd& b, const GmresOptions& opt = {}) {
  using C = std::complex<double>;
  const Eigen::Index n = b.size();
  GmresResult out;
  out.x = Eigen::VectorXcd::Zero(n);
  double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }
  int m = std::min<int>(opt.max_iter, int(n));
  Eigen::MatrixXcd V(n, m + 1);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
  std::vector<C> cs(m), sn(m);
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(m + 1);
  V.col(0) = b / bnorm;
  g(0) = bnorm;
  int k = 0;
  double est = 1.0;
  for (; k < m; ++k) {
    Eigen::VectorXcd w = A(V.col(k));
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXcd h = V.leftCols(k + 1).adjoint() * w;
      w -= V.leftCols(k + 1) * h;
      H.col(k).head(k + 1) += h;
    }
    double hn = w.norm();
    H(k + 1, k) = hn;
    bool breakdown = hn == 0.0;
    if (!breakdown) V.col(k + 1) = w / hn;
    for (int i = 0; i < k; ++i) {
      C t = std::conj(cs[i]) * H(i, k) + std::conj(sn[i]) * H(i + 1, k);
      H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
      H(i, k) = t;
    }
    C a = H(k, k), bb = H(k + 1, k);
    double r = std::hypot(std::abs(a), std::abs(bb));
    if (r == 0.0) {
      cs[k] = 1.0;
      sn[k] = 0.0;
    } else {
      cs[k] = a / r;
      sn[k] = bb / r;
    }
    H(k, k) = r;
    H(k + 1, k) = 0.0;
    g(k + 1) = -sn[k] * g(k);
    g(k) = std::conj(cs[k]) * g(k);
    est = std::abs(g(k + 1)) / bnorm;
    if (est < opt.tol || breakdown) {
      ++k;
      break;
    }
  }
  out.iterations = k;
  out.estimated_residual = est;
  if (k > 0) {
    Eigen::VectorXcd y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    out.x = V.leftCols(k) * y;
  }
  out.true_residual = (b - A(out.x)).norm() / bnorm;
  out.converged = est < opt.tol;
  out.stagnated = !out.converged;
  return out;
}

inline GmresResult gmres(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const GmresOptions& opt = {}) {
  return gmres([&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return A * v; }, b, opt);
}

} // namespace eddy
