#pragma once

#include <Eigen/Dense>

#include "pulsesq/dispersion.hpp"
#include "pulsesq/field_grid.hpp"
#include "pulsesq/propagator.hpp"

namespace pulsesq {

struct GaussianModel {
  double delta = 0.0;  // rad/fs, pump-correlation width
  double Delta = 0.0;  // rad/fs, phase-matching bandwidth
  double N = 0.0;      // photons per pulse
  double r = 0.0;      // ln(Delta/delta)/2
  double tau_s = 0.0;  // fs, sqrt(2/(delta Delta))
};

// Normalized Hermite function: H_n(u) e^{-u^2/2} / sqrt(2^n n! sqrt(pi)).
double hermite_function(int n, double u);

double sinc(double x);

// (L/L_nl) p(omega + omega') e^{i[k(omega) - k(omega')] L/2} sinc(L dk/2) d omega, exact dk.
Eigen::MatrixXcd first_order_S(const PumpSpec& spec, const DispersionModel& model, const FrequencyGrid& grid);

GaussianModel gaussian_params(const PumpSpec& spec, const DispersionModel& model);

// zeta_n = sqrt(N) / cosh(r) * tanh(r)^n, n = 0..n_max-1.
Eigen::VectorXd analytic_zetas(const GaussianModel& gm, int n_max);

// Gaussian-approximated kernel S_G on the grid, d omega weighted like first_order_S.
Eigen::MatrixXcd gaussian_kernel_S(const GaussianModel& gm, const PumpSpec& spec, const DispersionModel& model,
                                   const FrequencyGrid& grid);

enum class ModeSide { input, output };

// Hermite-Gauss mode of width tau_s around omega_p/2, carrying the free-propagation phase
// e^{-i k L/2} (output) or e^{+i k L/2} (input), normalized on the grid.
Eigen::VectorXcd hermite_mode(int n, double tau_s, const DispersionModel& model, double L, const FrequencyGrid& grid,
                              ModeSide side, Frame frame = Frame::lab);

// Psi(omega, omega') = S(omega, omega') e^{i k(omega') L}.
Eigen::MatrixXcd biphoton_from_green(const Eigen::MatrixXcd& S, const DispersionModel& model,
                                     const FrequencyGrid& grid, double L);

struct SchmidtDecomposition {
  Eigen::VectorXd coeffs;  // descending
  Eigen::MatrixXcd modes;  // Psi = sum coeffs_n u_n u_n^T d omega, sum |u_n|^2 d omega = 1
};

SchmidtDecomposition schmidt_decompose(const Eigen::MatrixXcd& Psi, const FrequencyGrid& grid,
                                       double symmetry_tol = 1e-6);

}  // namespace pulsesq
