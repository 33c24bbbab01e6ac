#pragma once

#include <Eigen/Dense>

#include "pulsesq/dispersion.hpp"

namespace pulsesq {

// omega_j = center + (j - n/2) * spacing, j = 0..n-1.
struct FrequencyGrid {
  int n_points = 0;
  double center = 0.0;   // rad/fs
  double spacing = 0.0;  // rad/fs

  double omega(int j) const { return center + (j - n_points / 2) * spacing; }
  double span() const { return n_points * spacing; }
  double time_window() const { return 2.0 * kPi / spacing; }
  double dt() const { return time_window() / n_points; }
  Eigen::VectorXd omegas() const;
  Eigen::VectorXd times() const;

  // Pump axis Omega_m = 2 omega_0 + m * spacing, m = 0..2n-1, so omega_j + omega_j' sits at m = j + j'.
  int pump_points() const { return 2 * n_points; }
  double pump_omega(int m) const { return 2.0 * omega(0) + m * spacing; }
  Eigen::VectorXd pump_omegas() const;

  // Time window must exceed 4 tau to avoid wraparound.
  bool fits_duration(double tau) const { return time_window() > 4.0 * tau; }

  bool operator==(const FrequencyGrid& o) const {
    return n_points == o.n_points && center == o.center && spacing == o.spacing;
  }
  bool operator!=(const FrequencyGrid& o) const { return !(*this == o); }
};

FrequencyGrid make_grid(int n_points, double center, double span);
FrequencyGrid default_grid(const DispersionModel& model);

enum class PumpShape { gaussian, monochromatic };

struct PumpSpec {
  double tau_p = 24.0;   // fs, Gaussian amplitude duration
  double omega_p = 0.0;  // rad/fs
  double L_nl = 1.0;     // mm; infinity switches the coupling off
  double L = 1.0;        // mm
  PumpShape shape = PumpShape::gaussian;
  double chirp = 0.0;  // fs^2, quadratic spectral phase; test hook only

  void validate() const;
};

PumpSpec default_pump(const DispersionModel& model, double L_nl);

// Real normalized profile p(Omega) on the 2n pump axis, sum p * dOmega = 1.
Eigen::VectorXd pump_profile(const PumpSpec& spec, const FrequencyGrid& grid);
// Profile times the optional chirp phase.
Eigen::VectorXcd pump_spectrum(const PumpSpec& spec, const FrequencyGrid& grid);

enum class Direction { to_time, to_frequency };

// Unitary DFT, f(t) = (1/sqrt(2 pi)) sum F(omega) e^{-i (omega - center) t} d omega.
Eigen::VectorXcd transform(const Eigen::VectorXcd& v, Direction direction, const FrequencyGrid& grid);

struct GridReport {
  bool time_window_ok = true;
  double max_duration = 0.0;
  double edge_ratio = 0.0;  // max over modes of |mode| at the outermost points / peak
  bool span_ok = true;
  bool ok() const { return time_window_ok && span_ok; }
};

// Checks the time window against the durations and the mode columns' edge amplitudes against 1e-6.
GridReport validate_grid(const FrequencyGrid& grid, double max_duration, const Eigen::MatrixXcd& modes);

}  // namespace pulsesq
