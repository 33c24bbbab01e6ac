#pragma once

namespace pulsesq {

inline constexpr double kSpeedOfLight = 2.99792458e-4;  // mm/fs
inline constexpr double kPi = 3.14159265358979323846;

// n^2(lambda) = A + B / (lambda^2 - C) - D lambda^2, lambda in micrometers.
struct Sellmeier {
  double A = 1.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;

  double n2(double lambda_um) const { return A + B / (lambda_um * lambda_um - C) - D * lambda_um * lambda_um; }
};

enum class Polarization { ordinary, extraordinary };
enum class Field { signal, pump };

struct DispersionModel {
  Sellmeier sellmeier_o;
  Sellmeier sellmeier_e;
  double theta = 0.0;  // rad, propagation axis vs optic axis
  double lambda_pump = 400.0;    // nm
  double lambda_signal = 800.0;  // nm
  double lambda_min = 200.0;     // nm, supported window
  double lambda_max = 2600.0;

  double omega_pump() const;
  double omega_signal() const;

  // Type-I BBO with theta solved for phase matching.
  static DispersionModel bbo();
  // n == 1 for both polarizations.
  static DispersionModel vacuum();
};

double omega_to_lambda_nm(double omega);
double lambda_nm_to_omega(double lambda_nm);

double refractive_index(const DispersionModel& model, double omega, Polarization pol);
double wavevector(const DispersionModel& model, double omega, Field field);

// Derivative of k (signal, at omega_p/2) or k_p (pump, at omega_p); order 1..3.
double beta(const DispersionModel& model, Field field, int order, double h = 1e-3);

double phase_mismatch(const DispersionModel& model, double omega, double omega_prime);
double phase_mismatch_quadratic(const DispersionModel& model, double omega, double omega_prime);

struct DispersionCoefficients {
  double omega_p = 0.0;
  double beta0 = 0.0;  // k(omega_p/2)
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  double beta0p = 0.0;  // k_p(omega_p)
  double beta1p = 0.0;
  double beta2p = 0.0;
  double beta3p = 0.0;
};

DispersionCoefficients dispersion_coefficients(const DispersionModel& model);
double phase_mismatch_quadratic(const DispersionCoefficients& c, double omega, double omega_prime);

double find_phase_matching_angle(const DispersionModel& model);

}  // namespace pulsesq
