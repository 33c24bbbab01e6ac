#include "pulsesq/dispersion.hpp"

#include <cmath>
#include <string>

#include "pulsesq/errors.hpp"

namespace pulsesq {

namespace {

double index_squared(const Sellmeier& s, double lambda_nm) { return s.n2(lambda_nm * 1e-3); }

void check_window(const DispersionModel& m, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("frequency must be positive, got " + std::to_string(omega) + " rad/fs");
  }
  const double lam = omega_to_lambda_nm(omega);
  if (lam < m.lambda_min || lam > m.lambda_max) {
    throw DomainError("wavelength " + std::to_string(lam) + " nm outside supported window [" +
                      std::to_string(m.lambda_min) + ", " + std::to_string(m.lambda_max) + "] nm");
  }
}

double inv_n2_at_angle(const DispersionModel& m, double lambda_nm, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return c * c / index_squared(m.sellmeier_o, lambda_nm) + s * s / index_squared(m.sellmeier_e, lambda_nm);
}

}  // namespace

double omega_to_lambda_nm(double omega) { return 2.0 * kPi * kSpeedOfLight / omega * 1e6; }

double lambda_nm_to_omega(double lambda_nm) { return 2.0 * kPi * kSpeedOfLight / (lambda_nm * 1e-6); }

double DispersionModel::omega_pump() const { return lambda_nm_to_omega(lambda_pump); }

double DispersionModel::omega_signal() const { return lambda_nm_to_omega(lambda_signal); }

DispersionModel DispersionModel::bbo() {
  DispersionModel m;
  m.sellmeier_o = {2.7359, 0.01878, 0.01822, 0.01354};
  m.sellmeier_e = {2.3753, 0.01224, 0.01667, 0.01516};
  m.theta = find_phase_matching_angle(m);
  return m;
}

DispersionModel DispersionModel::vacuum() {
  DispersionModel m;
  m.sellmeier_o = {1.0, 0.0, 0.0, 0.0};
  m.sellmeier_e = {1.0, 0.0, 0.0, 0.0};
  m.theta = 0.0;
  return m;
}

double refractive_index(const DispersionModel& model, double omega, Polarization pol) {
  check_window(model, omega);
  const double lam = omega_to_lambda_nm(omega);
  double n2 = 0.0;
  if (pol == Polarization::ordinary) {
    n2 = index_squared(model.sellmeier_o, lam);
  } else {
    n2 = 1.0 / inv_n2_at_angle(model, lam, model.theta);
  }
  if (!(n2 > 1.0) && n2 != 1.0) {
    throw DomainError("refractive index below one at " + std::to_string(lam) + " nm");
  }
  return std::sqrt(n2);
}

double wavevector(const DispersionModel& model, double omega, Field field) {
  const auto pol = field == Field::signal ? Polarization::ordinary : Polarization::extraordinary;
  return refractive_index(model, omega, pol) * omega / kSpeedOfLight;
}

double beta(const DispersionModel& model, Field field, int order, double h) {
  if (order < 1 || order > 3) {
    throw DomainError("dispersion order must be 1, 2 or 3");
  }
  const double w0 = field == Field::signal ? model.omega_pump() / 2.0 : model.omega_pump();
  auto k = [&](double w) { return wavevector(model, w, field); };
  auto stencil = [&](double s) {
    switch (order) {
      case 1:
        return (k(w0 + s) - k(w0 - s)) / (2.0 * s);
      case 2:
        return (k(w0 + s) - 2.0 * k(w0) + k(w0 - s)) / (s * s);
      default:
        return (k(w0 + 2.0 * s) - 2.0 * k(w0 + s) + 2.0 * k(w0 - s) - k(w0 - 2.0 * s)) / (2.0 * s * s * s);
    }
  };
  // Richardson: all three stencils have an h^2 leading error.
  return (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0;
}

double phase_mismatch(const DispersionModel& model, double omega, double omega_prime) {
  return wavevector(model, omega + omega_prime, Field::pump) - wavevector(model, omega, Field::signal) -
         wavevector(model, omega_prime, Field::signal);
}

DispersionCoefficients dispersion_coefficients(const DispersionModel& model) {
  DispersionCoefficients c;
  c.omega_p = model.omega_pump();
  c.beta0 = wavevector(model, c.omega_p / 2.0, Field::signal);
  c.beta1 = beta(model, Field::signal, 1);
  c.beta2 = beta(model, Field::signal, 2);
  c.beta3 = beta(model, Field::signal, 3);
  c.beta0p = wavevector(model, c.omega_p, Field::pump);
  c.beta1p = beta(model, Field::pump, 1);
  c.beta2p = beta(model, Field::pump, 2);
  c.beta3p = beta(model, Field::pump, 3);
  return c;
}

double phase_mismatch_quadratic(const DispersionCoefficients& c, double omega, double omega_prime) {
  const double sum = omega + omega_prime - c.omega_p;
  const double x = omega - c.omega_p / 2.0;
  const double xp = omega_prime - c.omega_p / 2.0;
  return (c.beta1p - c.beta1) * sum + 0.5 * c.beta2p * sum * sum - 0.5 * c.beta2 * (x * x + xp * xp);
}

double phase_mismatch_quadratic(const DispersionModel& model, double omega, double omega_prime) {
  return phase_mismatch_quadratic(dispersion_coefficients(model), omega, omega_prime);
}

double find_phase_matching_angle(const DispersionModel& model) {
  const double target = 1.0 / index_squared(model.sellmeier_o, model.lambda_signal);
  auto f = [&](double theta) { return inv_n2_at_angle(model, model.lambda_pump, theta) - target; };
  double lo = 0.0;
  double hi = kPi / 2.0;
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0 && fhi == 0.0) {
    return 0.0;
  }
  if (flo == 0.0) {
    return lo;
  }
  if (flo * fhi > 0.0) {
    throw DomainError("no phase-matching angle: indices cannot match between " +
                      std::to_string(model.lambda_pump) + " nm and " + std::to_string(model.lambda_signal) + " nm");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace pulsesq
