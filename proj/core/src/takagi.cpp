#include "pulsesq/takagi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pulsesq/errors.hpp"

namespace pulsesq {

namespace {

// Takagi of a small symmetric block through the real embedding [[X, Y], [Y, -X]].
// An eigenvector (a; b) with eigenvalue s > 0 gives M conj(u) = s u for u = a + i b.
void takagi_block(const Eigen::MatrixXcd& M, Eigen::MatrixXcd& Q, Eigen::VectorXd& s) {
  const Eigen::Index m = M.rows();
  const Eigen::MatrixXd X = M.real();
  const Eigen::MatrixXd Y = M.imag();
  Eigen::MatrixXd H(2 * m, 2 * m);
  H << X, Y, Y, -X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  // Eigenvalues ascending: the top m are the +s branch.
  Q.resize(m, m);
  s.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index idx = 2 * m - 1 - k;
    s(k) = es.eigenvalues()(idx);
    const auto v = es.eigenvectors().col(idx);
    Q.col(k) = (v.head(m).cast<std::complex<double>>() + std::complex<double>(0.0, 1.0) * v.tail(m).cast<std::complex<double>>());
  }
}

}  // namespace

double symmetry_defect(const Eigen::MatrixXcd& A) {
  const double na = A.norm();
  if (na == 0.0) return 0.0;
  return (A - A.transpose()).norm() / na;
}

TakagiResult takagi(const Eigen::MatrixXcd& A, double rel_tol) {
  if (A.rows() != A.cols()) throw InvariantViolation("takagi: matrix is not square");
  const Eigen::Index n = A.rows();
  TakagiResult out;
  out.values = Eigen::VectorXd::Zero(n);
  out.U = Eigen::MatrixXcd::Identity(n, n);
  if (n == 0) return out;

  const Eigen::MatrixXcd As = 0.5 * (A + A.transpose());
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(As, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sig = svd.singularValues();
  const Eigen::MatrixXcd& W = svd.matrixU();
  const double smax = sig(0);
  if (smax == 0.0) return out;
  const double zero_tol = 64.0 * std::numeric_limits<double>::epsilon() * smax * static_cast<double>(n);

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && sig(end - 1) - sig(end) <= rel_tol * smax) ++end;
    const Eigen::Index m = end - start;
    if (sig(start) <= zero_tol) {
      out.U.middleCols(start, n - start) = W.middleCols(start, n - start);
      out.values.segment(start, n - start) = sig.segment(start, n - start);
      break;
    }
    const Eigen::MatrixXcd Wb = W.middleCols(start, m);
    Eigen::MatrixXcd Mb = Wb.adjoint() * As * Wb.conjugate();
    Mb = 0.5 * (Mb + Mb.transpose()).eval();
    Eigen::MatrixXcd Q;
    Eigen::VectorXd s;
    takagi_block(Mb, Q, s);
    out.U.middleCols(start, m) = Wb * Q;
    out.values.segment(start, m) = s;
    start = end;
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return out.values(a) > out.values(b); });
  TakagiResult sorted;
  sorted.values.resize(n);
  sorted.U.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sorted.values(k) = out.values(order[k]);
    sorted.U.col(k) = out.U.col(order[k]);
  }
  return sorted;
}

}  // namespace pulsesq
