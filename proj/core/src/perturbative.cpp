#include "pulsesq/perturbative.hpp"

#include <cmath>
#include <string>

#include "pulsesq/errors.hpp"
#include "pulsesq/takagi.hpp"

namespace pulsesq {

using cd = std::complex<double>;

double hermite_function(int n, double u) {
  if (n < 0) throw ConfigError("hermite order must be non-negative");
  const double h0 = std::pow(kPi, -0.25) * std::exp(-0.5 * u * u);
  if (n == 0) return h0;
  double prev = h0;
  double cur = std::sqrt(2.0) * u * h0;
  for (int k = 1; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * u * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

Eigen::MatrixXcd first_order_S(const PumpSpec& spec, const DispersionModel& model, const FrequencyGrid& grid) {
  spec.validate();
  const int n = grid.n_points;
  const Eigen::VectorXcd p = pump_spectrum(spec, grid);
  Eigen::VectorXd k(n);
  for (int j = 0; j < n; ++j) k(j) = wavevector(model, grid.omega(j), Field::signal);
  Eigen::VectorXd kp(2 * n - 1);
  for (int m = 0; m < 2 * n - 1; ++m) kp(m) = wavevector(model, grid.pump_omega(m), Field::pump);

  const double L = spec.L;
  const double g = std::isfinite(spec.L_nl) ? L / spec.L_nl * grid.spacing : 0.0;
  Eigen::MatrixXcd S(n, n);
  for (int jp = 0; jp < n; ++jp) {
    for (int j = 0; j < n; ++j) {
      const double dk = kp(j + jp) - k(j) - k(jp);
      S(j, jp) = g * p(j + jp) * std::polar(1.0, (k(j) - k(jp)) * L / 2.0) * sinc(L * dk / 2.0);
    }
  }
  return S;
}

GaussianModel gaussian_params(const PumpSpec& spec, const DispersionModel& model) {
  spec.validate();
  const DispersionCoefficients c = dispersion_coefficients(model);
  // Stencil roundoff on beta2 is about eps * k / h^2; below that counts as zero.
  if (!(c.beta2 > 1e-8 * std::abs(c.beta0))) {
    throw DomainError("Gaussian model needs normal group-velocity dispersion, beta2 = " + std::to_string(c.beta2));
  }
  const double L = spec.L;
  const double gvm = c.beta1 - c.beta1p;
  GaussianModel gm;
  gm.delta = 1.0 / std::sqrt(spec.tau_p * spec.tau_p + L * L / 10.0 * gvm * gvm);
  gm.Delta = 1.0 / std::sqrt(L * c.beta2 / 12.0);
  const double s = std::isfinite(spec.L_nl) ? L / spec.L_nl : 0.0;
  gm.N = s * s / 4.0 * spec.tau_p * spec.tau_p * gm.delta * gm.Delta;
  gm.r = 0.5 * std::log(gm.Delta / gm.delta);
  gm.tau_s = std::sqrt(2.0 / (gm.delta * gm.Delta));
  return gm;
}

Eigen::VectorXd analytic_zetas(const GaussianModel& gm, int n_max) {
  Eigen::VectorXd z(n_max);
  const double z0 = std::sqrt(gm.N) / std::cosh(gm.r);
  const double t = std::tanh(gm.r);
  for (int k = 0; k < n_max; ++k) z(k) = z0 * std::pow(t, k);
  return z;
}

Eigen::MatrixXcd gaussian_kernel_S(const GaussianModel& gm, const PumpSpec& spec, const DispersionModel& model,
                                   const FrequencyGrid& grid) {
  const int n = grid.n_points;
  const double wp = spec.omega_p;
  Eigen::VectorXd k(n);
  for (int j = 0; j < n; ++j) k(j) = wavevector(model, grid.omega(j), Field::signal);
  const double amp = std::sqrt(2.0 * gm.N / (kPi * gm.delta * gm.Delta)) * grid.spacing;
  Eigen::MatrixXcd S(n, n);
  for (int jp = 0; jp < n; ++jp) {
    for (int j = 0; j < n; ++j) {
      const double u = grid.omega(j) + grid.omega(jp) - wp;
      const double v = grid.omega(j) - grid.omega(jp);
      const double e = -u * u / (2.0 * gm.delta * gm.delta) - v * v / (2.0 * gm.Delta * gm.Delta);
      S(j, jp) = amp * std::exp(e) * std::polar(1.0, (k(j) - k(jp)) * spec.L / 2.0);
    }
  }
  return S;
}

Eigen::VectorXcd hermite_mode(int n, double tau_s, const DispersionModel& model, double L, const FrequencyGrid& grid,
                              ModeSide side, Frame frame) {
  if (n < 0 || n > 20) throw ConfigError("hermite_mode order must be in 0..20");
  if (!(tau_s > 0.0)) throw ConfigError("tau_s must be positive");
  const double wc = model.omega_pump() / 2.0;
  const double sign = side == ModeSide::output ? -1.0 : 1.0;
  Eigen::VectorXd rate = Eigen::VectorXd::Zero(grid.n_points);
  if (frame == Frame::moving) rate = moving_frame_rate(model, grid);
  Eigen::VectorXcd v(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) {
    const double w = grid.omega(j);
    // The moving frame multiplies output modes by e^{+i phi L/2} and input modes by e^{-i phi L/2}.
    const double phase = sign * (wavevector(model, w, Field::signal) - rate(j)) * L / 2.0;
    v(j) = std::sqrt(tau_s) * hermite_function(n, tau_s * (w - wc)) * std::polar(1.0, phase);
  }
  const double norm = std::sqrt(v.squaredNorm() * grid.spacing);
  if (norm == 0.0) throw DomainError("hermite mode vanishes on the grid");
  return v / norm;
}

Eigen::MatrixXcd biphoton_from_green(const Eigen::MatrixXcd& S, const DispersionModel& model,
                                     const FrequencyGrid& grid, double L) {
  if (S.rows() != grid.n_points || S.cols() != grid.n_points) throw ConfigError("biphoton: size mismatch");
  Eigen::VectorXcd ph(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) ph(j) = std::polar(1.0, wavevector(model, grid.omega(j), Field::signal) * L);
  return S * ph.asDiagonal();
}

SchmidtDecomposition schmidt_decompose(const Eigen::MatrixXcd& Psi, const FrequencyGrid& grid, double symmetry_tol) {
  const double defect = symmetry_defect(Psi);
  if (defect > symmetry_tol) {
    throw InvariantViolation("biphoton not symmetric: relative defect " + std::to_string(defect));
  }
  const TakagiResult tk = takagi(Psi);
  SchmidtDecomposition out;
  out.coeffs = tk.values;
  out.modes = tk.U / std::sqrt(grid.spacing);
  return out;
}

}  // namespace pulsesq
