#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pulsesq/decomposition.hpp"
#include "pulsesq/propagator.hpp"

namespace pulsesq {

struct LocalOscillator {
  Eigen::VectorXcd amplitude;  // sum |.|^2 d omega = 1
  std::string label;
  Frame frame = Frame::lab;
};

// Gaussian intensity around omega_p/2. Phase-locked LOs carry e^{-i k(omega) L/2}, the phase of the
// output squeezing modes; the moving-frame version has e^{-i[k - phi] L/2}.
LocalOscillator gaussian_lo(double tau_lo, const DispersionModel& model, double L, const FrequencyGrid& grid,
                            bool phase_locked, Frame frame);

// Normalizes an arbitrary amplitude into an LO.
LocalOscillator make_lo(const Eigen::VectorXcd& amplitude, const FrequencyGrid& grid, Frame frame,
                        std::string label = "custom");

struct LoDecomposition {
  Eigen::VectorXd M;
  Eigen::VectorXd theta;  // (-pi, pi]
  double leakage = 0.0;   // 1 - sum M^2
};

// M_n e^{i theta_n} = sum conj(psi_n) psi_LO d omega over the first n_modes modes (all when <= 0).
LoDecomposition lo_decompose(const LocalOscillator& lo, const ModeDecomposition& md, int n_modes = -1);

// sum (M^2/4)(e^{2 zeta} sin^2(theta + phi) + e^{-2 zeta} cos^2(theta + phi)) + leakage/4.
double quadrature_noise(const Eigen::VectorXd& M, const Eigen::VectorXd& theta, const Eigen::VectorXd& zetas,
                        double leakage, double global_phase);

struct NoiseExtrema {
  double q2_min = 0.25;
  double q2_max = 0.25;
  double theta_opt = 0.0;  // (-pi/2, pi/2]
};

NoiseExtrema min_max_noise(const Eigen::VectorXd& M, const Eigen::VectorXd& theta, const Eigen::VectorXd& zetas,
                           double leakage);

struct Efficiency {
  double eta = 0.0;
  bool degenerate = false;
};

Efficiency efficiency(double q2_min, double q2_max);

struct HomodyneReport {
  Eigen::VectorXd M;
  Eigen::VectorXd theta;
  double q2_min = 0.25;
  double q2_max = 0.25;
  double theta_opt = 0.0;
  Efficiency eta;
  double leakage = 0.0;
};

HomodyneReport analyze(const LocalOscillator& lo, const ModeDecomposition& md, int n_modes = -1);

// Independent path straight from (C, S): b = sum v_j a_out,j with v = psi_LO sqrt(d omega),
// g = C^T v, h = S^T v, <Q^2> = (|g|^2 + |h|^2 - 2 Re(e^{2 i phi} g^T h)) / 4.
double direct_quadrature_noise(const LocalOscillator& lo, const GreenPair& gp, double global_phase);

struct SweepRow {
  double L_nl = 0.0;
  double tau_lo = 0.0;
  double q2_min = 0.0;
  double q2_max = 0.0;
  Efficiency eta;
  double theta_opt = 0.0;
  double leakage = 0.0;
};

// One row per (decomposition, tau_LO), phase-locked Gaussian LOs in the decomposition's frame.
std::vector<SweepRow> lo_sweep(const std::vector<double>& tau_list, const std::vector<ModeDecomposition>& modes);

}  // namespace pulsesq
