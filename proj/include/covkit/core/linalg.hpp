#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>

#include "covkit/core/rng.hpp"
#include "covkit/core/types.hpp"

namespace covkit {

// log|det(m)| by pivoted LU. A pivot below 1e-12 * max|entry| is treated as
// rank deficiency and reported as such.
inline double logdet_lu(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionError("logdet_lu: matrix not square");
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;
  const double tol = 1e-12 * m.cwiseAbs().maxCoeff();
  Mat a = m;
  double logdet = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    double best = std::abs(a(k, k));
    for (Eigen::Index r = k + 1; r < n; ++r) {
      if (std::abs(a(r, k)) > best) {
        best = std::abs(a(r, k));
        piv = r;
      }
    }
    if (!(best > tol))
      throw SingularError("logdet_lu: rank-deficient matrix (pivot " +
                          std::to_string(best) + " at column " + std::to_string(k) + ")");
    if (piv != k) a.row(piv).swap(a.row(k));
    logdet += std::log(best);
    for (Eigen::Index r = k + 1; r < n; ++r) {
      const double f = a(r, k) / a(k, k);
      a.row(r).tail(n - k - 1) -= f * a.row(k).tail(n - k - 1);
      a(r, k) = 0.0;
    }
  }
  return logdet;
}

// (1/2) log det(J^T J) for a full-column-rank rectangular J, via QR of J.
// More stable than forming the Gram matrix.
inline double half_logdet_gram(const Mat& J) {
  if (J.rows() < J.cols())
    throw DimensionError("half_logdet_gram: more columns than rows");
  Eigen::HouseholderQR<Mat> qr(J);
  const Mat& R = qr.matrixQR();
  const double tol = 1e-12 * (J.cwiseAbs().maxCoeff() + 1e-300);
  double s = 0.0;
  for (Eigen::Index i = 0; i < J.cols(); ++i) {
    const double d = std::abs(R(i, i));
    if (!(d > tol)) throw SingularError("half_logdet_gram: rank-deficient Jacobian");
    s += std::log(d);
  }
  return s;
}

// Conjugate gradients for SPD systems given only a matvec.
inline Vec cg_solve(const std::function<Vec(const Vec&)>& matvec, const Vec& b,
                    double tol = 1e-10, int max_iter = -1) {
  const Eigen::Index n = b.size();
  if (max_iter < 0) max_iter = static_cast<int>(10 * n);
  Vec x = Vec::Zero(n);
  Vec r = b;
  Vec p = r;
  double rs = r.squaredNorm();
  const double stop = tol * tol * b.squaredNorm();
  for (int it = 0; it < max_iter && rs > stop; ++it) {
    const Vec ap = matvec(p);
    const double alpha = rs / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    const double rs_new = r.squaredNorm();
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  if (rs > stop && rs > 1e-24)
    throw ModelError("cg_solve: no convergence after " + std::to_string(max_iter) +
                     " iterations");
  return x;
}

// Largest singular value of A, estimated by power iteration on A^T A.
inline double spectral_norm(const Mat& A, int iters = 200) {
  if (A.size() == 0) return 0.0;
  Vec v = Vec::Ones(A.cols()).normalized();
  double s = 0.0;
  for (int i = 0; i < iters; ++i) {
    Vec w = A.transpose() * (A * v);
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    s = std::sqrt(n);
  }
  return s;
}

// Haar-ish random orthogonal matrix from the QR of a Gaussian matrix with
// sign-fixed R diagonal.
inline Mat random_orthogonal(int n, RngStream& rng) {
  Mat g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (rmat(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

inline Mat rotation2d(double theta) {
  Mat r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace covkit
