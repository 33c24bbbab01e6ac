#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pulsesq/propagator.hpp"

namespace pulsesq {

// C = sum_n conj(psi_n) cosh(zeta_n) phi_n^T d omega,  S = sum_n conj(psi_n) sinh(zeta_n) phi_n^dag d omega.
// Mode columns are sampled amplitudes normalized as sum |.|^2 d omega = 1.
struct ModeDecomposition {
  Eigen::VectorXd zetas;
  Eigen::MatrixXcd phi;
  Eigen::MatrixXcd psi;
  double pairing_residual = 0.0;       // max |sigma_C^2 - sigma_S^2 - 1|
  double reconstruction_C = 0.0;       // Frobenius
  double reconstruction_S = 0.0;
  double orthonormality = 0.0;         // max of both bases
  FrequencyGrid grid;
  Frame frame = Frame::lab;
  GreenMeta meta;
};

// tol_degeneracy <= 0 selects 1e-6 * sigma_0(C).
ModeDecomposition bloch_messiah(const GreenPair& gp, double tol_degeneracy = -1.0);

// |<psi_n, conj(phi_n)>| for n < n_top.
Eigen::VectorXd verify_conjugacy(const ModeDecomposition& md, int n_top);

// sum sinh^2 zeta_n.
double total_photons(const ModeDecomposition& md);

// ||S||_F^2 of the discrete pair.
double photons_from_green(const GreenPair& gp);

// Modes re-expressed in the other frame: psi_mov = D psi_lab, phi_mov = conj(D) phi_lab, D = e^{i phi(omega) L/2}.
ModeDecomposition modes_in_frame(const ModeDecomposition& md, Frame target);

struct HermiteFit {
  double tau_s = 0.0;
  double residual = 0.0;  // relative L2 misfit of the intensity profile
};

// Least-squares fit of |mode|^2 to the order-n Hermite-Gauss intensity centered on the grid center.
HermiteFit fit_hermite(const Eigen::VectorXcd& mode, int n, const FrequencyGrid& grid);
// Same fit, throws ConvergenceError when the residual exceeds 0.2.
double fit_hermite_width(const Eigen::VectorXcd& mode, int n, const FrequencyGrid& grid);

struct ZetaScaling {
  std::vector<double> L_nl;
  Eigen::MatrixXd scaled;  // row per L_nl, L_nl * zeta_n for the first n_modes modes
};

ZetaScaling zeta_scaling_table(const PumpSpec& base, const std::vector<double>& L_nl_list,
                               const DispersionModel& model, const FrequencyGrid& grid, int n_modes);

}  // namespace pulsesq
