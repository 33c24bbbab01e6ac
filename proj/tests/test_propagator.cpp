#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pulsesq/decomposition.hpp"
#include "pulsesq/errors.hpp"
#include "pulsesq/propagator.hpp"
#include "support.hpp"

using namespace pulsesq;
using testing_support::Gen;
using cd = std::complex<double>;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd signal_k(const DispersionModel& m, const FrequencyGrid& g) {
  Eigen::VectorXd k(g.n_points);
  for (int j = 0; j < g.n_points; ++j) k(j) = wavevector(m, g.omega(j), Field::signal);
  return k;
}

Eigen::VectorXcd run(const Eigen::VectorXcd& a, double L_nl, Scheme s, int steps = 0) {
  const PumpSpec p = testing_support::pump(L_nl);
  return propagate_field(a, p, testing_support::bbo(), testing_support::small_grid(), s,
                         steps > 0 ? steps : default_steps(s, p));
}

}  // namespace

TEST(Propagator, DefaultStepCounts) {
  EXPECT_EQ(default_steps(Scheme::split_step, testing_support::pump(1.0)), 400);
  EXPECT_EQ(default_steps(Scheme::split_step, testing_support::pump(1.0 / 15.0)), 1200);
  EXPECT_EQ(default_steps(Scheme::rk4, testing_support::pump(1.0)), 2000);
  EXPECT_EQ(default_steps(Scheme::split_step, testing_support::pump(kInf)), 400);
}

TEST(Propagator, FreePropagationIsPurePhase) {
  const FrequencyGrid g = testing_support::small_grid();
  const Eigen::VectorXd k = signal_k(testing_support::bbo(), g);
  Gen gen(31);
  const Eigen::VectorXcd a = gen.vector(g.n_points);
  for (Scheme s : {Scheme::split_step, Scheme::rk4}) {
    const Eigen::VectorXcd out = run(a, kInf, s, 50);
    for (int j = 0; j < g.n_points; ++j) {
      // k L is ~1e4 rad; rounding accumulates over the phase factors
      EXPECT_LT(std::abs(out(j) - std::polar(1.0, k(j)) * a(j)), 1e-9 * std::abs(a(j))) << to_string(s);
    }
  }
}

TEST(Propagator, FreeGreenPairIsDiagonalPhase) {
  const FrequencyGrid g = testing_support::small_grid();
  const Eigen::VectorXd k = signal_k(testing_support::bbo(), g);
  const GreenPair gp = compute_green(testing_support::pump(kInf), testing_support::bbo(), g, Scheme::split_step, 10);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(g.n_points, g.n_points);
  for (int j = 0; j < g.n_points; ++j) expected(j, j) = std::polar(1.0, k(j));
  EXPECT_LT((gp.C - expected).norm(), 1e-10);
  EXPECT_EQ(gp.S.norm(), 0.0);
}

TEST(Propagator, ContinuousWaveQuadraturesScaleByNonlinearLength) {
  const DispersionModel vac = DispersionModel::vacuum();
  const FrequencyGrid g = make_grid(64, vac.omega_pump() / 2.0, 0.6);
  PumpSpec p = default_pump(vac, 0.5);
  p.shape = PumpShape::monochromatic;
  const int c = g.n_points / 2;
  const double kc = wavevector(vac, g.omega(c), Field::signal);
  const double gain = std::exp(p.L / p.L_nl);
  for (Scheme s : {Scheme::split_step, Scheme::rk4}) {
    for (cd q : {cd(1.0, 0.0), cd(0.0, 1.0)}) {
      Eigen::VectorXcd a = Eigen::VectorXcd::Zero(g.n_points);
      a(c) = q * std::polar(1.0, -kc * p.L / 2.0);
      Eigen::VectorXcd out = propagate_field(a, p, vac, g, s, default_steps(s, p));
      const cd expected = q * std::polar(1.0, kc * p.L / 2.0) * (q.real() != 0.0 ? gain : 1.0 / gain);
      EXPECT_LT(std::abs(out(c) - expected) / std::abs(expected), 1e-8) << to_string(s);
      out(c) = 0.0;
      EXPECT_LT(out.norm(), 1e-12);
    }
  }
}

TEST(Propagator, SchemesAgree) {
  Gen gen(32);
  for (double L_nl : {1.0, 0.5}) {
    const Eigen::VectorXcd a = gen.vector(testing_support::small_grid().n_points);
    const Eigen::VectorXcd x = run(a, L_nl, Scheme::split_step);
    const Eigen::VectorXcd y = run(a, L_nl, Scheme::rk4);
    EXPECT_LT((x - y).norm() / y.norm(), 1e-6) << L_nl;
  }
}

TEST(Propagator, LinearOverRealsOnly) {
  Gen gen(33);
  const int n = testing_support::small_grid().n_points;
  for (int trial = 0; trial < 4; ++trial) {
    const Eigen::VectorXcd a = gen.vector(n), b = gen.vector(n);
    const double x = gen.uniform(-2.0, 2.0), y = gen.uniform(-2.0, 2.0);
    const Eigen::VectorXcd lhs = run(x * a + y * b, 1.0, Scheme::split_step);
    const Eigen::VectorXcd rhs = x * run(a, 1.0, Scheme::split_step) + y * run(b, 1.0, Scheme::split_step);
    EXPECT_LT((lhs - rhs).norm() / rhs.norm(), 1e-12);
  }
  const Eigen::VectorXcd a = gen.vector(n);
  const Eigen::VectorXcd ia = run(cd(0.0, 1.0) * a, 1.0, Scheme::split_step);
  const Eigen::VectorXcd i_a = cd(0.0, 1.0) * run(a, 1.0, Scheme::split_step);
  EXPECT_GT((ia - i_a).norm() / i_a.norm(), 1e-2);
}

TEST(Propagator, GreenPairSymplectic) {
  for (double L_nl : {100.0, 1.0, 0.2}) {
    const GreenPair& gp = testing_support::small_green(L_nl);
    const SymplecticResiduals r = symplectic_residuals(gp);
    EXPECT_LT(r.unitarity, 1e-8) << L_nl;
    EXPECT_LT(r.symmetry, 1e-8) << L_nl;
    EXPECT_DOUBLE_EQ(gp.meta.r_unitarity, r.unitarity);
    EXPECT_EQ(gp.meta.n_steps, default_steps(Scheme::split_step, gp.meta.pump));
    EXPECT_EQ(gp.frame, Frame::lab);
  }
}

TEST(Propagator, GreenColumnsReproducePropagation) {
  const GreenPair& gp = testing_support::small_green(1.0);
  Gen gen(34);
  const Eigen::VectorXcd a = gen.vector(gp.grid.n_points);
  const Eigen::VectorXcd direct = run(a, 1.0, Scheme::split_step);
  EXPECT_LT((gp.C * a + gp.S * a.conjugate() - direct).norm() / direct.norm(), 1e-12);
}

TEST(Propagator, SymplecticResidualsOfIdentityAndMisweightedPair) {
  const int n = 16;
  const SymplecticResiduals id = symplectic_residuals(Eigen::MatrixXcd::Identity(n, n), Eigen::MatrixXcd::Zero(n, n));
  EXPECT_EQ(id.unitarity, 0.0);
  EXPECT_EQ(id.symmetry, 0.0);

  // Kernel values C/d omega summed with a single d omega weight.
  const GreenPair& gp = testing_support::small_green(1.0);
  const double dw = gp.grid.spacing;
  const SymplecticResiduals bad = symplectic_residuals(gp.C / std::sqrt(dw), gp.S / std::sqrt(dw));
  EXPECT_NEAR(bad.unitarity, std::abs(1.0 - 1.0 / dw), 1e-8 * (1.0 / dw));
}

TEST(Propagator, MovingFrameRoundTripAndInvariance) {
  const GreenPair& lab = testing_support::small_green(1.0);
  const GreenPair mov = to_moving_frame(lab);
  EXPECT_EQ(mov.frame, Frame::moving);
  const GreenPair back = to_lab_frame(mov);
  EXPECT_LT((back.C - lab.C).norm() / lab.C.norm(), 1e-12);
  EXPECT_LT((back.S - lab.S).norm() / lab.S.norm(), 1e-12);
  EXPECT_THROW(to_moving_frame(mov), InvariantViolation);
  EXPECT_THROW(to_lab_frame(lab), InvariantViolation);
  const SymplecticResiduals a = symplectic_residuals(lab), b = symplectic_residuals(mov);
  EXPECT_NEAR(a.unitarity, b.unitarity, 1e-12);
  EXPECT_NEAR(a.symmetry, b.symmetry, 1e-12);
}

TEST(Propagator, MovingFrameFreePhaseIsResidualDispersion) {
  const FrequencyGrid g = testing_support::small_grid();
  const DispersionModel& m = testing_support::bbo();
  const GreenPair gp = to_moving_frame(compute_green(testing_support::pump(kInf), m, g, Scheme::split_step, 4));
  const double wc = m.omega_pump() / 2.0;
  const double b0 = wavevector(m, wc, Field::signal), b1 = beta(m, Field::signal, 1);
  for (int j = 0; j < g.n_points; ++j) {
    const double x = g.omega(j) - wc;
    const double phase = wavevector(m, g.omega(j), Field::signal) - b0 - b1 * x;
    EXPECT_LT(std::abs(gp.C(j, j) - std::polar(1.0, phase)), 1e-9);
    // residual is dominated by beta_2 x^2 / 2
    EXPECT_NEAR(phase, 0.5 * beta(m, Field::signal, 2) * x * x, 0.2 * std::abs(x * x * x) * 60.0 + 1e-9);
  }
}

TEST(Propagator, ReversePropagationUndoesForward) {
  const PumpSpec p = testing_support::pump(0.5);
  const FrequencyGrid g = testing_support::small_grid();
  const int steps = default_steps(Scheme::split_step, p);
  const GreenPair fwd = compute_green(p, testing_support::bbo(), g, Scheme::split_step, steps);
  const GreenPair bwd = compute_green(p, testing_support::bbo(), g, Scheme::split_step, steps, true, true);
  const GreenPair id = compose(bwd, fwd);
  EXPECT_LT((id.C - Eigen::MatrixXcd::Identity(g.n_points, g.n_points)).norm(), 1e-8);
  EXPECT_LT(id.S.norm(), 1e-8);
}

TEST(Propagator, StepDoublingLeavesLeadingSqueezingUnchanged) {
  const PumpSpec p = testing_support::pump(1.0);
  const FrequencyGrid g = testing_support::small_grid();
  const double z1 = bloch_messiah(testing_support::small_green(1.0)).zetas(0);
  const double z2 =
      bloch_messiah(compute_green(p, testing_support::bbo(), g, Scheme::split_step, 2 * default_steps(Scheme::split_step, p)))
          .zetas(0);
  EXPECT_LT(std::abs(z1 - z2) / z2, 1e-6);
}

TEST(Propagator, ColumnOrderDoesNotChangeTheResult) {
  const PumpSpec p = testing_support::pump(1.0);
  const FrequencyGrid g = testing_support::small_grid();
  const GreenPair a = compute_green(p, testing_support::bbo(), g, Scheme::split_step, 50, true, false, 1);
  const GreenPair b = compute_green(p, testing_support::bbo(), g, Scheme::split_step, 50, true, false, 3);
  EXPECT_TRUE(a.C == b.C);
  EXPECT_TRUE(a.S == b.S);
}

TEST(Propagator, BadInputsRejected) {
  const FrequencyGrid g = testing_support::small_grid();
  const PumpSpec p = testing_support::pump(1.0);
  Eigen::VectorXcd a = Eigen::VectorXcd::Ones(g.n_points);
  EXPECT_THROW(propagate_field(a, p, testing_support::bbo(), g, Scheme::split_step, 0), ConfigError);
  EXPECT_THROW(propagate_field(Eigen::VectorXcd::Ones(8), p, testing_support::bbo(), g, Scheme::split_step, 10),
               ConfigError);
  PumpSpec longp = p;
  longp.tau_p = 500.0;
  EXPECT_THROW(propagate_field(a, longp, testing_support::bbo(), g, Scheme::split_step, 10), DomainError);
  a(3) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(propagate_field(a, p, testing_support::bbo(), g, Scheme::rk4, 10), ConvergenceError);
}

TEST(Propagator, ComposeRejectsMismatchedFrames) {
  const GreenPair& lab = testing_support::small_green(1.0);
  EXPECT_THROW(compose(to_moving_frame(lab), lab), ConfigError);
}
