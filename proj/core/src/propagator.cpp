#include "pulsesq/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fft.hpp"
#include "pulsesq/errors.hpp"

namespace pulsesq {

using cd = std::complex<double>;

std::string to_string(Scheme s) { return s == Scheme::split_step ? "split_step" : "rk4"; }

std::string to_string(Frame f) { return f == Frame::lab ? "lab" : "moving"; }

int default_steps(Scheme scheme, const PumpSpec& spec) {
  const double base = scheme == Scheme::split_step ? 400.0 : 2000.0;
  const double strength = std::isfinite(spec.L_nl) ? spec.L / spec.L_nl : 0.0;
  const double scale = std::max(1.0, strength / 5.0) * std::max(1.0, spec.L);
  return static_cast<int>(std::ceil(base * scale));
}

int thread_count() {
  if (const char* env = std::getenv("PULSESQ_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

struct Setup {
  int n = 0;
  double L = 0.0;
  double L_nl = 0.0;
  Eigen::VectorXd k;   // signal, n
  Eigen::VectorXd kp;  // pump axis, 2n
  Eigen::VectorXcd a;  // d omega * p / L_nl on the pump axis
  double a_norm = 0.0;  // sum |a|, bounds ||K||
  bool coupled = false;
};

Setup make_setup(const PumpSpec& spec, const DispersionModel& model, const FrequencyGrid& grid) {
  spec.validate();
  if (!grid.fits_duration(spec.tau_p)) {
    throw DomainError("time window " + std::to_string(grid.time_window()) + " fs too short for tau_p = " +
                      std::to_string(spec.tau_p) + " fs");
  }
  Setup s;
  s.n = grid.n_points;
  s.L = spec.L;
  s.L_nl = spec.L_nl;
  s.k.resize(s.n);
  for (int j = 0; j < s.n; ++j) s.k(j) = wavevector(model, grid.omega(j), Field::signal);
  s.kp.resize(2 * s.n);
  s.a = Eigen::VectorXcd::Zero(2 * s.n);
  s.coupled = std::isfinite(spec.L_nl);
  if (s.coupled) {
    const Eigen::VectorXcd p = pump_spectrum(spec, grid);
    for (int m = 0; m < 2 * s.n; ++m) {
      // The last pump bin is never indexed by j + j' and may fall outside the window.
      s.kp(m) = m + 1 < 2 * s.n ? wavevector(model, grid.pump_omega(m), Field::pump) : 0.0;
    }
    s.a = p * (grid.spacing / spec.L_nl);
    s.a(2 * s.n - 1) = 0.0;
    s.a_norm = s.a.cwiseAbs().sum();
  } else {
    s.kp.setZero();
  }
  return s;
}

void check_growth(const Setup& s, const Eigen::MatrixXcd& in, const Eigen::MatrixXcd& out) {
  const double bound = s.coupled ? std::exp(2.0 * s.L / s.L_nl) * 10.0 : 10.0;
  for (Eigen::Index c = 0; c < in.cols(); ++c) {
    const double ni = in.col(c).norm();
    const double no = out.col(c).norm();
    if (!std::isfinite(no) || no > bound * ni) {
      throw ConvergenceError("field norm grew by " + std::to_string(no / ni) + ", step size too coarse");
    }
  }
}

// Split-step: exact phase for dispersion, exact exponential of y -> K(z) conj(y) for the coupling.
class SplitStep {
 public:
  SplitStep(const Setup& s, int n_steps, bool backward) : s_(s), kernel_plan_(2 * s.n, FFTW_FORWARD) {
    // Suzuki 5-stage symmetric composition of Strang steps, 4th order.
    const double w1 = 1.0 / (4.0 - std::cbrt(4.0));
    const double w0 = 1.0 - 4.0 * w1;
    const double h = (backward ? -1.0 : 1.0) * s.L / n_steps;
    double z = backward ? s.L / 2.0 : -s.L / 2.0;
    const double z_start = z;

    double pending = 0.0;
    auto flush = [&]() {
      if (pending != 0.0) {
        ops_.push_back({false, linear_index(pending)});
        pending = 0.0;
      }
    };
    for (int step = 0; step < n_steps; ++step) {
      z = z_start + step * h;  // re-anchor to keep the clock free of drift
      for (double w : {w1, w1, w0, w1, w1}) {
        const double hh = w * h;
        pending += hh / 2.0;
        z += hh / 2.0;
        if (s_.coupled) {
          flush();
          ops_.push_back({true, nonlinear_index(hh, z)});
        }
        pending += hh / 2.0;
        z += hh / 2.0;
      }
    }
    flush();
  }

  void run(Eigen::Ref<Eigen::MatrixXcd> y) const {
    const int n = s_.n;
    const int n2 = 2 * n;
    detail::FftPlan fwd(n2, FFTW_FORWARD);
    detail::FftPlan bwd(n2, FFTW_BACKWARD);
    // Out-of-place complex plans preserve their input, so the zero padding is written once.
    std::fill(fwd.in(), fwd.in() + n2, cd(0.0));
    std::vector<cd> v(n), acc(n), term(n);
    cd* in = fwd.in();
    const cd* spec = fwd.out();
    cd* prod = bwd.in();
    const cd* res = bwd.out();
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
      for (int j = 0; j < n; ++j) v[j] = y(j, c);
      for (const Op& op : ops_) {
        if (!op.nonlinear) {
          const cd* ph = phases_[op.index].data();
          for (int j = 0; j < n; ++j) v[j] *= ph[j];
          continue;
        }
        const Nonlinear& nl = nonlinear_[op.index];
        const cd* ah = nl.a_hat.data();
        acc = v;
        term = v;
        for (int m = 1; m <= nl.terms; ++m) {
          // conj(term) at index -j' mod 2n turns the Hankel sum into a cyclic convolution.
          in[0] = std::conj(term[0]);
          for (int j = 1; j < n; ++j) in[n2 - j] = std::conj(term[j]);
          fwd.execute();
          for (int l = 0; l < n2; ++l) prod[l] = spec[l] * ah[l];
          bwd.execute();
          const double f = nl.h / m;
          for (int j = 0; j < n; ++j) {
            term[j] = f * res[j];
            acc[j] += term[j];
          }
        }
        v.swap(acc);
      }
      for (int j = 0; j < n; ++j) y(j, c) = v[j];
    }
  }

 private:
  struct Op {
    bool nonlinear;
    std::size_t index;
  };
  struct Nonlinear {
    double h;
    int terms;
    Eigen::VectorXcd a_hat;  // DFT of the kernel at z, divided by 2n
  };

  std::size_t linear_index(double dz) {
    auto it = linear_lookup_.find(dz);
    if (it != linear_lookup_.end()) return it->second;
    Eigen::VectorXcd ph(s_.n);
    for (int j = 0; j < s_.n; ++j) ph(j) = std::polar(1.0, s_.k(j) * dz);
    phases_.push_back(std::move(ph));
    linear_lookup_.emplace(dz, phases_.size() - 1);
    return phases_.size() - 1;
  }

  std::size_t nonlinear_index(double hh, double z) {
    const int n2 = 2 * s_.n;
    detail::FftPlan& plan = kernel_plan_;
    for (int m = 0; m < n2; ++m) plan.in()[m] = s_.a(m) * std::polar(1.0, s_.kp(m) * z);
    plan.execute();
    Nonlinear nl;
    nl.h = hh;
    nl.a_hat.resize(n2);
    for (int m = 0; m < n2; ++m) nl.a_hat(m) = plan.out()[m] / static_cast<double>(n2);
    const double x = std::abs(hh) * s_.a_norm;
    double bound = 1.0;
    nl.terms = 0;
    while (bound > 1e-17 && nl.terms < 200) {
      ++nl.terms;
      bound *= x / nl.terms;
    }
    nonlinear_.push_back(std::move(nl));
    return nonlinear_.size() - 1;
  }

  const Setup& s_;
  detail::FftPlan kernel_plan_;
  std::vector<Op> ops_;
  std::vector<Eigen::VectorXcd> phases_;
  std::map<double, std::size_t> linear_lookup_;
  std::vector<Nonlinear> nonlinear_;
};

// Classic RK4 in the interaction picture alpha = e^{i k z} beta with the explicit dense kernel.
class Rk4 {
 public:
  Rk4(const Setup& s, int n_steps, bool backward) : s_(s), steps_(n_steps) {
    h_ = (backward ? -1.0 : 1.0) * s.L / n_steps;
    z0_ = backward ? s.L / 2.0 : -s.L / 2.0;
  }

  void run(Eigen::Ref<Eigen::MatrixXcd> y) const {
    Eigen::MatrixXcd b = phase(-z0_).asDiagonal() * y;
    if (s_.coupled) {
      Eigen::MatrixXcd k1, k2, k3, k4;
      Eigen::MatrixXcd K0 = kernel(z0_);
      for (int step = 0; step < steps_; ++step) {
        const double z = z0_ + step * h_;
        const Eigen::MatrixXcd Kh = kernel(z + h_ / 2.0);
        Eigen::MatrixXcd K1 = kernel(z + h_);
        k1.noalias() = K0 * b.conjugate();
        k2.noalias() = Kh * (b + (h_ / 2.0) * k1).conjugate();
        k3.noalias() = Kh * (b + (h_ / 2.0) * k2).conjugate();
        k4.noalias() = K1 * (b + h_ * k3).conjugate();
        b += (h_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        K0 = std::move(K1);
      }
    }
    y = phase(z0_ + steps_ * h_).asDiagonal() * b;
  }

 private:
  Eigen::VectorXcd phase(double z) const {
    Eigen::VectorXcd ph(s_.n);
    for (int j = 0; j < s_.n; ++j) ph(j) = std::polar(1.0, s_.k(j) * z);
    return ph;
  }

  Eigen::MatrixXcd kernel(double z) const {
    const int n = s_.n;
    Eigen::VectorXcd c = phase(-z);
    Eigen::VectorXcd am(2 * n);
    for (int m = 0; m < 2 * n; ++m) am(m) = s_.a(m) * std::polar(1.0, s_.kp(m) * z);
    Eigen::MatrixXcd K(n, n);
    for (int jp = 0; jp < n; ++jp) {
      for (int j = 0; j < n; ++j) K(j, jp) = c(j) * am(j + jp) * c(jp);
    }
    return K;
  }

  const Setup& s_;
  int steps_;
  double h_;
  double z0_;
};

template <typename Engine>
void run_columns(const Engine& engine, Eigen::MatrixXcd& y, int threads) {
  const Eigen::Index cols = y.cols();
  threads = static_cast<int>(std::clamp<Eigen::Index>(threads, 1, std::max<Eigen::Index>(cols, 1)));
  if (threads == 1) {
    engine.run(y);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const Eigen::Index chunk = (cols + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const Eigen::Index begin = t * chunk;
    const Eigen::Index count = std::min(chunk, cols - begin);
    if (count <= 0) break;
    pool.emplace_back([&, t, begin, count]() {
      try {
        engine.run(y.middleCols(begin, count));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double spectral_norm_hermitian(const Eigen::MatrixXcd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Eigen::MatrixXcd propagate_block(const Eigen::MatrixXcd& alpha_in, const PumpSpec& spec,
                                 const DispersionModel& model, const FrequencyGrid& grid, Scheme scheme,
                                 int n_steps, bool backward, int threads) {
  if (alpha_in.rows() != grid.n_points) {
    throw ConfigError("field length " + std::to_string(alpha_in.rows()) + " does not match grid size " +
                      std::to_string(grid.n_points));
  }
  if (n_steps < 1) throw ConfigError("n_steps must be >= 1");
  if (threads <= 0) threads = thread_count();
  const Setup s = make_setup(spec, model, grid);
  Eigen::MatrixXcd y = alpha_in;
  if (scheme == Scheme::split_step) {
    const SplitStep engine(s, n_steps, backward);
    run_columns(engine, y, threads);
  } else {
    const Rk4 engine(s, n_steps, backward);
    run_columns(engine, y, threads);
  }
  check_growth(s, alpha_in, y);
  return y;
}

Eigen::VectorXcd propagate_field(const Eigen::VectorXcd& alpha_in, const PumpSpec& spec,
                                 const DispersionModel& model, const FrequencyGrid& grid, Scheme scheme,
                                 int n_steps, bool backward) {
  return propagate_block(alpha_in, spec, model, grid, scheme, n_steps, backward, 1).col(0);
}

GreenPair compute_green(const PumpSpec& spec, const DispersionModel& model, const FrequencyGrid& grid,
                        Scheme scheme, int n_steps, bool validate, bool backward, int threads) {
  const int n = grid.n_points;
  Eigen::MatrixXcd in = Eigen::MatrixXcd::Zero(n, 2 * n);
  in.leftCols(n).setIdentity();
  in.rightCols(n) = cd(0.0, 1.0) * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd r = propagate_block(in, spec, model, grid, scheme, n_steps, backward, threads);
  const cd i(0.0, 1.0);

  GreenPair gp;
  gp.C = 0.5 * (r.leftCols(n) - i * r.rightCols(n));
  gp.S = 0.5 * (r.leftCols(n) + i * r.rightCols(n));
  gp.grid = grid;
  gp.frame = Frame::lab;
  gp.meta.pump = spec;
  gp.meta.model = model;
  gp.meta.scheme = scheme;
  gp.meta.n_steps = n_steps;

  if (validate) {
    const auto res = symplectic_residuals(gp);
    gp.meta.r_unitarity = res.unitarity;
    gp.meta.r_symmetry = res.symmetry;
    if (!(res.unitarity <= 1e-8) || !(res.symmetry <= 1e-8)) {
      throw InvariantViolation("symplectic residuals " + std::to_string(res.unitarity) + ", " +
                               std::to_string(res.symmetry) + " exceed 1e-8");
    }
  }
  return gp;
}

Eigen::VectorXd moving_frame_rate(const DispersionModel& model, const FrequencyGrid& grid) {
  const double wc = model.omega_pump() / 2.0;
  const double b0 = wavevector(model, wc, Field::signal);
  const double b1 = beta(model, Field::signal, 1);
  Eigen::VectorXd phi(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) phi(j) = b0 + b1 * (grid.omega(j) - wc);
  return phi;
}

namespace {

Eigen::VectorXcd frame_phase(const GreenPair& gp) {
  const Eigen::VectorXd phi = moving_frame_rate(gp.meta.model, gp.grid);
  Eigen::VectorXcd d(phi.size());
  for (Eigen::Index j = 0; j < phi.size(); ++j) d(j) = std::polar(1.0, phi(j) * gp.meta.pump.L / 2.0);
  return d;
}

}  // namespace

GreenPair to_moving_frame(const GreenPair& gp) {
  if (gp.frame != Frame::lab) throw InvariantViolation("Green pair is already in the moving frame");
  const Eigen::VectorXcd d = frame_phase(gp);
  const Eigen::VectorXcd dc = d.conjugate();
  GreenPair out = gp;
  out.C = dc.asDiagonal() * gp.C * dc.asDiagonal();
  out.S = dc.asDiagonal() * gp.S * d.asDiagonal();
  out.frame = Frame::moving;
  return out;
}

GreenPair to_lab_frame(const GreenPair& gp) {
  if (gp.frame != Frame::moving) throw InvariantViolation("Green pair is already in the lab frame");
  const Eigen::VectorXcd d = frame_phase(gp);
  const Eigen::VectorXcd dc = d.conjugate();
  GreenPair out = gp;
  out.C = d.asDiagonal() * gp.C * d.asDiagonal();
  out.S = d.asDiagonal() * gp.S * dc.asDiagonal();
  out.frame = Frame::lab;
  return out;
}

SymplecticResiduals symplectic_residuals(const Eigen::MatrixXcd& C, const Eigen::MatrixXcd& S) {
  const Eigen::Index n = C.rows();
  Eigen::MatrixXcd U = C * C.adjoint() - S * S.adjoint() - Eigen::MatrixXcd::Identity(n, n);
  U = 0.5 * (U + U.adjoint()).eval();
  const Eigen::MatrixXcd A = C * S.transpose() - S * C.transpose();
  const Eigen::MatrixXcd AA = A.adjoint() * A;
  SymplecticResiduals r;
  r.unitarity = spectral_norm_hermitian(U);
  r.symmetry = std::sqrt(spectral_norm_hermitian(0.5 * (AA + AA.adjoint())));
  return r;
}

SymplecticResiduals symplectic_residuals(const GreenPair& gp) { return symplectic_residuals(gp.C, gp.S); }

GreenPair compose(const GreenPair& second, const GreenPair& first) {
  if (second.grid != first.grid || second.frame != first.frame) {
    throw ConfigError("compose: grid or frame mismatch");
  }
  GreenPair out = first;
  out.C = second.C * first.C + second.S * first.S.conjugate();
  out.S = second.C * first.S + second.S * first.C.conjugate();
  out.meta.r_unitarity = -1.0;
  out.meta.r_symmetry = -1.0;
  return out;
}

}  // namespace pulsesq
