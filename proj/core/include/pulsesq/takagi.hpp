#pragma once

#include <Eigen/Dense>

namespace pulsesq {

// A = U diag(values) U^T for complex symmetric A, values descending, U unitary.
struct TakagiResult {
  Eigen::VectorXd values;
  Eigen::MatrixXcd U;
};

// Singular values within rel_tol * sigma_max of each other are treated as one degenerate block.
TakagiResult takagi(const Eigen::MatrixXcd& A, double rel_tol = 1e-9);

// ||A - A^T||_F / ||A||_F (0 for the zero matrix).
double symmetry_defect(const Eigen::MatrixXcd& A);

}  // namespace pulsesq
