#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <random>

#include <Eigen/Dense>

#include "pulsesq/decomposition.hpp"
#include "pulsesq/dispersion.hpp"
#include "pulsesq/field_grid.hpp"
#include "pulsesq/propagator.hpp"

namespace testing_support {

using cd = std::complex<double>;

// Fixed-seed sample source for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
  cd complex_normal() { return {normal(), normal()}; }

  Eigen::VectorXcd vector(int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  Eigen::MatrixXcd matrix(int r, int c) {
    Eigen::MatrixXcd m(r, c);
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) m(i, j) = complex_normal();
    return m;
  }

  Eigen::MatrixXcd symmetric(int n) {
    const Eigen::MatrixXcd a = matrix(n, n);
    return (a + a.transpose()) / 2.0;
  }

  Eigen::MatrixXcd unitary(int n) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(matrix(n, n));
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    return q;
  }

 private:
  std::mt19937_64 eng_;
};

inline const pulsesq::DispersionModel& bbo() {
  static const pulsesq::DispersionModel m = pulsesq::DispersionModel::bbo();
  return m;
}

// 64 points over 0.6 rad/fs: 670 fs window, modes decay below 1e-6 at the edges.
inline pulsesq::FrequencyGrid small_grid() { return pulsesq::make_grid(64, bbo().omega_pump() / 2.0, 0.6); }

inline pulsesq::PumpSpec pump(double L_nl) { return pulsesq::default_pump(bbo(), L_nl); }

// Split-step pairs on the small grid, cached per process.
inline const pulsesq::GreenPair& small_green(double L_nl) {
  static std::map<double, pulsesq::GreenPair> cache;
  auto it = cache.find(L_nl);
  if (it != cache.end()) return it->second;
  const pulsesq::PumpSpec p = pump(L_nl);
  return cache
      .emplace(L_nl, pulsesq::compute_green(p, bbo(), small_grid(), pulsesq::Scheme::split_step,
                                            pulsesq::default_steps(pulsesq::Scheme::split_step, p)))
      .first->second;
}

inline const pulsesq::ModeDecomposition& small_modes(double L_nl) {
  static std::map<double, pulsesq::ModeDecomposition> cache;
  auto it = cache.find(L_nl);
  if (it != cache.end()) return it->second;
  return cache.emplace(L_nl, pulsesq::bloch_messiah(pulsesq::to_moving_frame(small_green(L_nl)))).first->second;
}

// Symplectic pair C = A diag(cosh z) A^T, S = A diag(sinh z) A^dag for unitary A.
struct SyntheticPair {
  Eigen::MatrixXcd C, S, A;
};

inline SyntheticPair synthetic_pair(const Eigen::MatrixXcd& A, const Eigen::VectorXd& z) {
  SyntheticPair p;
  p.A = A;
  p.C = A * z.array().cosh().matrix().asDiagonal() * A.transpose();
  p.S = A * z.array().sinh().matrix().asDiagonal() * A.adjoint();
  return p;
}

inline pulsesq::GreenPair as_green(const SyntheticPair& p, const pulsesq::FrequencyGrid& grid) {
  pulsesq::GreenPair gp;
  gp.C = p.C;
  gp.S = p.S;
  gp.grid = grid;
  return gp;
}

}  // namespace testing_support
