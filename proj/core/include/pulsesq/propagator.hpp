#pragma once

#include <string>

#include <Eigen/Dense>

#include "pulsesq/dispersion.hpp"
#include "pulsesq/field_grid.hpp"

namespace pulsesq {

enum class Scheme { split_step, rk4 };
enum class Frame { lab, moving };

std::string to_string(Scheme s);
std::string to_string(Frame f);

struct GreenMeta {
  PumpSpec pump;
  DispersionModel model;
  Scheme scheme = Scheme::split_step;
  int n_steps = 0;
  double r_unitarity = -1.0;  // negative until validated
  double r_symmetry = -1.0;
};

// Discrete-mode Bogoliubov pair: alpha_out = C alpha_in + S conj(alpha_in).
// Entries are dimensionless; the d omega weight is already inside.
struct GreenPair {
  Eigen::MatrixXcd C;
  Eigen::MatrixXcd S;
  FrequencyGrid grid;
  Frame frame = Frame::lab;
  GreenMeta meta;
};

struct SymplecticResiduals {
  double unitarity = 0.0;  // ||C C^dag - S S^dag - I||_2
  double symmetry = 0.0;   // ||C S^T - S C^T||_2
};

// 400 (split-step) or 2000 (rk4) per mm, scaled by (L/L_nl)/5 beyond L/L_nl = 5.
int default_steps(Scheme scheme, const PumpSpec& spec);

// Worker threads for column-parallel work; PULSESQ_THREADS overrides the hardware count.
int thread_count();

// alpha(+L/2) from alpha(-L/2), or the reverse when backward is set.
Eigen::VectorXcd propagate_field(const Eigen::VectorXcd& alpha_in, const PumpSpec& spec,
                                 const DispersionModel& model, const FrequencyGrid& grid, Scheme scheme,
                                 int n_steps, bool backward = false);

// Columns propagated independently; same contract as propagate_field.
Eigen::MatrixXcd propagate_block(const Eigen::MatrixXcd& alpha_in, const PumpSpec& spec,
                                 const DispersionModel& model, const FrequencyGrid& grid, Scheme scheme,
                                 int n_steps, bool backward = false, int threads = 0);

// Lab-frame Green pair. Throws InvariantViolation when validate is set and a residual exceeds 1e-8.
GreenPair compute_green(const PumpSpec& spec, const DispersionModel& model, const FrequencyGrid& grid,
                        Scheme scheme, int n_steps, bool validate = true, bool backward = false,
                        int threads = 0);

// phi(omega) = beta_0 + beta_1 (omega - omega_p/2), sampled on the grid.
Eigen::VectorXd moving_frame_rate(const DispersionModel& model, const FrequencyGrid& grid);

GreenPair to_moving_frame(const GreenPair& gp);
GreenPair to_lab_frame(const GreenPair& gp);

SymplecticResiduals symplectic_residuals(const Eigen::MatrixXcd& C, const Eigen::MatrixXcd& S);
SymplecticResiduals symplectic_residuals(const GreenPair& gp);

// The map "first, then second".
GreenPair compose(const GreenPair& second, const GreenPair& first);

}  // namespace pulsesq
