#include "pulsesq/homodyne.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "pulsesq/errors.hpp"

namespace pulsesq {

using cd = std::complex<double>;

LocalOscillator gaussian_lo(double tau_lo, const DispersionModel& model, double L, const FrequencyGrid& grid,
                            bool phase_locked, Frame frame) {
  if (!(tau_lo > 0.0)) throw ConfigError("tau_LO must be positive");
  if (!grid.fits_duration(tau_lo)) {
    throw DomainError("tau_LO = " + std::to_string(tau_lo) + " fs does not fit the time window");
  }
  const double wc = model.omega_pump() / 2.0;
  Eigen::VectorXd rate = Eigen::VectorXd::Zero(grid.n_points);
  if (frame == Frame::moving) rate = moving_frame_rate(model, grid);
  Eigen::VectorXcd v(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) {
    const double x = grid.omega(j) - wc;
    const double mag = std::exp(-0.5 * x * x * tau_lo * tau_lo);
    double phase = 0.0;
    if (phase_locked) phase = -(wavevector(model, grid.omega(j), Field::signal) - rate(j)) * L / 2.0;
    v(j) = std::polar(mag, phase);
  }
  return make_lo(v, grid, frame,
                 std::string("gaussian(") + std::to_string(tau_lo) + (phase_locked ? ",locked)" : ",flat)"));
}

LocalOscillator make_lo(const Eigen::VectorXcd& amplitude, const FrequencyGrid& grid, Frame frame, std::string label) {
  if (amplitude.size() != grid.n_points) throw ConfigError("LO length does not match grid");
  const double norm = std::sqrt(amplitude.squaredNorm() * grid.spacing);
  if (!(norm > 0.0)) throw ConfigError("LO amplitude is zero");
  LocalOscillator lo;
  lo.amplitude = amplitude / norm;
  lo.label = std::move(label);
  lo.frame = frame;
  return lo;
}

LoDecomposition lo_decompose(const LocalOscillator& lo, const ModeDecomposition& md, int n_modes) {
  if (lo.amplitude.size() != md.psi.rows()) throw ConfigError("lo_decompose: grid mismatch");
  if (lo.frame != md.frame) {
    throw ConfigError("lo_decompose: LO is in the " + to_string(lo.frame) + " frame, modes in the " +
                      to_string(md.frame) + " frame");
  }
  const Eigen::Index m = n_modes <= 0 ? md.psi.cols() : std::min<Eigen::Index>(n_modes, md.psi.cols());
  const Eigen::VectorXcd c = md.psi.leftCols(m).adjoint() * lo.amplitude * md.grid.spacing;
  LoDecomposition d;
  d.M = c.cwiseAbs();
  d.theta.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) d.theta(k) = std::arg(c(k));
  d.leakage = 1.0 - d.M.squaredNorm();
  return d;
}

double quadrature_noise(const Eigen::VectorXd& M, const Eigen::VectorXd& theta, const Eigen::VectorXd& zetas,
                        double leakage, double global_phase) {
  double q = leakage / 4.0;
  for (Eigen::Index k = 0; k < M.size(); ++k) {
    const double a = theta(k) + global_phase;
    const double s = std::sin(a), c = std::cos(a);
    q += M(k) * M(k) / 4.0 * (std::exp(2.0 * zetas(k)) * s * s + std::exp(-2.0 * zetas(k)) * c * c);
  }
  return q;
}

NoiseExtrema min_max_noise(const Eigen::VectorXd& M, const Eigen::VectorXd& theta, const Eigen::VectorXd& zetas,
                           double leakage) {
  // Q^2(phi) = a - Re(e^{2 i phi} Z), Z = sum (M^2/4) sinh(2 zeta) e^{2 i theta}.
  double a = leakage / 4.0;
  cd Z(0.0, 0.0);
  for (Eigen::Index k = 0; k < M.size(); ++k) {
    const double w = M(k) * M(k) / 4.0;
    a += w * std::cosh(2.0 * zetas(k));
    Z += w * std::sinh(2.0 * zetas(k)) * std::polar(1.0, 2.0 * theta(k));
  }
  NoiseExtrema e;
  e.q2_min = a - std::abs(Z);
  e.q2_max = a + std::abs(Z);
  double phi = -std::arg(Z) / 2.0;
  if (phi <= -kPi / 2.0) phi += kPi;
  e.theta_opt = phi;
  return e;
}

Efficiency efficiency(double q2_min, double q2_max) {
  const double den = 4.0 * q2_max + 4.0 * q2_min - 2.0;
  const double num = -16.0 * q2_max * q2_min + 4.0 * q2_max + 4.0 * q2_min - 1.0;
  Efficiency e;
  if (std::abs(den) < 1e-12) {
    e.degenerate = true;
    e.eta = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  e.eta = num / den;
  return e;
}

HomodyneReport analyze(const LocalOscillator& lo, const ModeDecomposition& md, int n_modes) {
  const LoDecomposition d = lo_decompose(lo, md, n_modes);
  const Eigen::VectorXd z = md.zetas.head(d.M.size());
  const NoiseExtrema ext = min_max_noise(d.M, d.theta, z, d.leakage);
  HomodyneReport r;
  r.M = d.M;
  r.theta = d.theta;
  r.leakage = d.leakage;
  r.q2_min = ext.q2_min;
  r.q2_max = ext.q2_max;
  r.theta_opt = ext.theta_opt;
  r.eta = efficiency(ext.q2_min, ext.q2_max);
  return r;
}

double direct_quadrature_noise(const LocalOscillator& lo, const GreenPair& gp, double global_phase) {
  if (lo.amplitude.size() != gp.C.rows()) throw ConfigError("direct noise: grid mismatch");
  if (lo.frame != gp.frame) throw ConfigError("direct noise: LO and Green pair frames differ");
  const Eigen::VectorXcd v = lo.amplitude * std::sqrt(gp.grid.spacing);
  const Eigen::VectorXcd g = gp.C.transpose() * v;
  const Eigen::VectorXcd h = gp.S.transpose() * v;
  const cd gh = (g.array() * h.array()).sum();
  return 0.25 * (g.squaredNorm() + h.squaredNorm() - 2.0 * (std::polar(1.0, 2.0 * global_phase) * gh).real());
}

std::vector<SweepRow> lo_sweep(const std::vector<double>& tau_list, const std::vector<ModeDecomposition>& modes) {
  std::vector<SweepRow> rows;
  rows.reserve(tau_list.size() * modes.size());
  for (const ModeDecomposition& md : modes) {
    for (double tau : tau_list) {
      const LocalOscillator lo = gaussian_lo(tau, md.meta.model, md.meta.pump.L, md.grid, true, md.frame);
      const HomodyneReport r = analyze(lo, md);
      SweepRow row;
      row.L_nl = md.meta.pump.L_nl;
      row.tau_lo = tau;
      row.q2_min = r.q2_min;
      row.q2_max = r.q2_max;
      row.eta = r.eta;
      row.theta_opt = r.theta_opt;
      row.leakage = r.leakage;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace pulsesq
