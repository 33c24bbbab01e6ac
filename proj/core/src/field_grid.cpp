#include "pulsesq/field_grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fft.hpp"
#include "pulsesq/errors.hpp"

namespace pulsesq {

Eigen::VectorXd FrequencyGrid::omegas() const {
  Eigen::VectorXd w(n_points);
  for (int j = 0; j < n_points; ++j) w(j) = omega(j);
  return w;
}

Eigen::VectorXd FrequencyGrid::times() const {
  Eigen::VectorXd t(n_points);
  for (int l = 0; l < n_points; ++l) t(l) = (l - n_points / 2) * dt();
  return t;
}

Eigen::VectorXd FrequencyGrid::pump_omegas() const {
  Eigen::VectorXd w(pump_points());
  for (int m = 0; m < pump_points(); ++m) w(m) = pump_omega(m);
  return w;
}

FrequencyGrid make_grid(int n_points, double center, double span) {
  if (n_points < 4 || (n_points & (n_points - 1)) != 0) {
    throw ConfigError("grid size must be a power of two >= 4, got " + std::to_string(n_points));
  }
  if (!(span > 0.0) || !std::isfinite(span)) {
    throw ConfigError("grid span must be positive");
  }
  if (!(center > 0.0)) {
    throw ConfigError("grid center must be positive");
  }
  return FrequencyGrid{n_points, center, span / n_points};
}

FrequencyGrid default_grid(const DispersionModel& model) { return make_grid(512, model.omega_pump() / 2.0, 2.0); }

void PumpSpec::validate() const {
  if (!(tau_p > 0.0) || !std::isfinite(tau_p)) throw ConfigError("tau_p must be positive");
  if (!(L_nl > 0.0)) throw ConfigError("L_nl must be positive");
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("crystal length must be positive");
  if (!(omega_p > 0.0)) throw ConfigError("pump frequency must be positive");
}

PumpSpec default_pump(const DispersionModel& model, double L_nl) {
  PumpSpec spec;
  spec.omega_p = model.omega_pump();
  spec.L_nl = L_nl;
  return spec;
}

Eigen::VectorXd pump_profile(const PumpSpec& spec, const FrequencyGrid& grid) {
  spec.validate();
  const int m_count = grid.pump_points();
  const double dw = grid.spacing;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(m_count);

  if (spec.shape == PumpShape::monochromatic) {
    const long m = std::lround((spec.omega_p - grid.pump_omega(0)) / dw);
    if (m < 0 || m >= m_count) throw DomainError("pump frequency outside the pump axis");
    p(m) = 1.0 / dw;
    return p;
  }

  const double lo = grid.pump_omega(0) - dw / 2.0;
  const double hi = grid.pump_omega(m_count - 1) + dw / 2.0;
  const double s = spec.tau_p / std::sqrt(2.0);
  const double cut = 0.5 * std::erfc(s * (spec.omega_p - lo)) + 0.5 * std::erfc(s * (hi - spec.omega_p));
  if (cut > 1e-8) {
    throw DomainError("pump spectrum truncated by the grid: mass cut " + std::to_string(cut));
  }

  double sum = 0.0;
  for (int m = 0; m < m_count; ++m) {
    const double x = grid.pump_omega(m) - spec.omega_p;
    p(m) = std::exp(-0.5 * spec.tau_p * spec.tau_p * x * x);
    sum += p(m);
  }
  p /= sum * dw;
  return p;
}

Eigen::VectorXcd pump_spectrum(const PumpSpec& spec, const FrequencyGrid& grid) {
  const Eigen::VectorXd p = pump_profile(spec, grid);
  Eigen::VectorXcd out = p.cast<std::complex<double>>();
  if (spec.chirp != 0.0) {
    for (int m = 0; m < p.size(); ++m) {
      const double x = grid.pump_omega(m) - spec.omega_p;
      out(m) *= std::polar(1.0, 0.5 * spec.chirp * x * x);
    }
  }
  return out;
}

Eigen::VectorXcd transform(const Eigen::VectorXcd& v, Direction direction, const FrequencyGrid& grid) {
  const int n = grid.n_points;
  if (v.size() != n) {
    throw ConfigError("transform: vector length " + std::to_string(v.size()) + " does not match grid size " +
                      std::to_string(n));
  }
  const bool forward = direction == Direction::to_time;
  detail::FftPlan plan(n, forward ? FFTW_FORWARD : FFTW_BACKWARD);
  // (-1)^j on input and output centres both axes; n % 4 == 0 drops the constant phase.
  for (int j = 0; j < n; ++j) plan.in()[j] = (j % 2 == 0) ? v(j) : -v(j);
  plan.execute();
  const double scale = (forward ? grid.spacing : grid.dt()) / std::sqrt(2.0 * kPi);
  Eigen::VectorXcd out(n);
  for (int l = 0; l < n; ++l) out(l) = ((l % 2 == 0) ? scale : -scale) * plan.out()[l];
  return out;
}

GridReport validate_grid(const FrequencyGrid& grid, double max_duration, const Eigen::MatrixXcd& modes) {
  GridReport r;
  r.max_duration = max_duration;
  r.time_window_ok = grid.fits_duration(max_duration);
  const int n = grid.n_points;
  for (Eigen::Index c = 0; c < modes.cols(); ++c) {
    const double peak = modes.col(c).cwiseAbs().maxCoeff();
    if (peak == 0.0) continue;
    const double edge = std::max(std::abs(modes(0, c)), std::abs(modes(n - 1, c)));
    r.edge_ratio = std::max(r.edge_ratio, edge / peak);
  }
  r.span_ok = r.edge_ratio <= 1e-6;
  return r;
}

}  // namespace pulsesq
