#include "pulsesq/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SVD>

#include "pulsesq/errors.hpp"
#include "pulsesq/perturbative.hpp"
#include "pulsesq/takagi.hpp"

namespace pulsesq {

using cd = std::complex<double>;

namespace {

double max_abs_offdiag(const Eigen::MatrixXcd& T) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < T.cols(); ++j) {
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
      if (i != j) m = std::max(m, std::abs(T(i, j)));
    }
  }
  return m;
}

double orthonormality_defect(const Eigen::MatrixXcd& modes, double dw) {
  const Eigen::Index n = modes.cols();
  return (modes.adjoint() * modes * dw - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace

ModeDecomposition bloch_messiah(const GreenPair& gp, double tol_degeneracy) {
  const Eigen::Index n = gp.C.rows();
  const double dw = gp.grid.spacing;

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(gp.C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sc = svd.singularValues();
  Eigen::MatrixXcd U = svd.matrixU();
  Eigen::MatrixXcd V = svd.matrixV();
  if (tol_degeneracy <= 0.0) tol_degeneracy = 1e-6 * sc(0);

  Eigen::MatrixXcd T = U.adjoint() * gp.S * V.conjugate();

  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start + 1;
    while (end < n && sc(end - 1) - sc(end) <= tol_degeneracy) ++end;
    blocks.emplace_back(start, end - start);
    start = end;
  }

  for (const auto& [start, m] : blocks) {
    if (m == 1) continue;
    const Eigen::MatrixXcd Tb = T.block(start, start, m, m);
    const TakagiResult tk = takagi(Tb);
    U.middleCols(start, m) = U.middleCols(start, m) * tk.U;
    V.middleCols(start, m) = V.middleCols(start, m) * tk.U;
  }
  T = U.adjoint() * gp.S * V.conjugate();

  const double scale = std::max(1.0, T.cwiseAbs().maxCoeff());
  const double off = max_abs_offdiag(T);
  if (off > 1e-6 * scale) {
    // Report the block that holds the largest off-diagonal entry.
    Eigen::Index bi = 0, bj = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i != j && std::abs(T(i, j)) > best) {
          best = std::abs(T(i, j));
          bi = i;
          bj = j;
        }
      }
    }
    std::vector<int> block;
    for (const auto& [start, m] : blocks) {
      if (bi >= start && bi < start + m) {
        for (Eigen::Index k = start; k < start + m; ++k) block.push_back(static_cast<int>(k));
      }
    }
    throw DegeneracyError("Bloch-Messiah: residual off-diagonal coupling " + std::to_string(off) +
                              " between modes " + std::to_string(bi) + " and " + std::to_string(bj),
                          block, off);
  }

  // Equal phase on a (U, V) column pair multiplies T_nn by e^{-2 i alpha}.
  Eigen::VectorXd s(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const cd d = T(k, k);
    const cd ph = std::polar(1.0, std::arg(d) / 2.0);
    U.col(k) *= ph;
    V.col(k) *= ph;
    s(k) = std::abs(d);
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return s(a) > s(b); });

  ModeDecomposition md;
  md.grid = gp.grid;
  md.frame = gp.frame;
  md.meta = gp.meta;
  md.zetas.resize(n);
  md.psi.resize(n, n);
  md.phi.resize(n, n);
  const double inv = 1.0 / std::sqrt(dw);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index o = order[k];
    md.zetas(k) = std::asinh(s(o));
    md.psi.col(k) = U.col(o).conjugate() * inv;
    md.phi.col(k) = V.col(o).conjugate() * inv;
    Eigen::Index peak = 0;
    md.psi.col(k).cwiseAbs().maxCoeff(&peak);
    if (md.psi(peak, k).real() < 0.0) {
      md.psi.col(k) *= -1.0;
      md.phi.col(k) *= -1.0;
    }
  }

  const Eigen::VectorXd ch = md.zetas.array().cosh();
  const Eigen::VectorXd sh = md.zetas.array().sinh();
  const Eigen::MatrixXcd psic = md.psi.conjugate();
  const Eigen::MatrixXcd C_rec = psic * ch.asDiagonal() * md.phi.transpose() * dw;
  const Eigen::MatrixXcd S_rec = psic * sh.asDiagonal() * md.phi.adjoint() * dw;
  md.reconstruction_C = (gp.C - C_rec).norm();
  md.reconstruction_S = (gp.S - S_rec).norm();

  Eigen::BDCSVD<Eigen::MatrixXcd> svd_s(gp.S);
  const Eigen::VectorXd ss = svd_s.singularValues();
  md.pairing_residual = (sc.array().square() - ss.array().square() - 1.0).abs().maxCoeff();
  md.orthonormality = std::max(orthonormality_defect(md.psi, dw), orthonormality_defect(md.phi, dw));

  const double tol = 1e-8 * std::max(1.0, gp.C.norm());
  if (!(md.reconstruction_C <= tol) || !(md.reconstruction_S <= tol)) {
    throw InvariantViolation("Bloch-Messiah reconstruction failed: " + std::to_string(md.reconstruction_C) + ", " +
                             std::to_string(md.reconstruction_S));
  }
  return md;
}

Eigen::VectorXd verify_conjugacy(const ModeDecomposition& md, int n_top) {
  n_top = std::min<int>(n_top, static_cast<int>(md.psi.cols()));
  Eigen::VectorXd out(n_top);
  for (int k = 0; k < n_top; ++k) {
    out(k) = std::abs((md.psi.col(k).array() * md.phi.col(k).array()).sum()) * md.grid.spacing;
  }
  return out;
}

double total_photons(const ModeDecomposition& md) { return md.zetas.array().sinh().square().sum(); }

double photons_from_green(const GreenPair& gp) { return gp.S.squaredNorm(); }

ModeDecomposition modes_in_frame(const ModeDecomposition& md, Frame target) {
  if (md.frame == target) return md;
  const Eigen::VectorXd rate = moving_frame_rate(md.meta.model, md.grid);
  // lab -> moving multiplies psi by D; moving -> lab by conj(D).
  const double sign = target == Frame::moving ? 1.0 : -1.0;
  Eigen::VectorXcd d(rate.size());
  for (Eigen::Index j = 0; j < rate.size(); ++j) d(j) = std::polar(1.0, sign * rate(j) * md.meta.pump.L / 2.0);
  ModeDecomposition out = md;
  out.psi = d.asDiagonal() * md.psi;
  out.phi = d.conjugate().asDiagonal() * md.phi;
  out.frame = target;
  return out;
}

HermiteFit fit_hermite(const Eigen::VectorXcd& mode, int n, const FrequencyGrid& grid) {
  const Eigen::Index m = mode.size();
  if (m != grid.n_points) throw ConfigError("fit_hermite: mode length does not match grid");
  const double dw = grid.spacing;
  const Eigen::VectorXd inten = mode.cwiseAbs2() / (mode.squaredNorm() * dw);
  const double ref = inten.norm();

  auto misfit = [&](double tau) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double x = grid.omega(static_cast<int>(j)) - grid.center;
      const double h = hermite_function(n, tau * x);
      const double d = inten(j) - tau * h * h;
      acc += d * d;
    }
    return std::sqrt(acc);
  };

  // Coarse logarithmic scan, then golden-section refinement.
  const int scan = 400;
  const double lo = std::log(0.5), hi = std::log(1000.0);
  int best = 0;
  double best_val = misfit(std::exp(lo));
  for (int i = 1; i <= scan; ++i) {
    const double v = misfit(std::exp(lo + (hi - lo) * i / scan));
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(best - 1, 0) / scan;
  double b = lo + (hi - lo) * std::min(best + 1, scan) / scan;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = misfit(std::exp(c)), fd = misfit(std::exp(d));
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = misfit(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = misfit(std::exp(d));
    }
  }
  HermiteFit fit;
  fit.tau_s = std::exp(0.5 * (a + b));
  fit.residual = ref > 0.0 ? misfit(fit.tau_s) / ref : 0.0;
  return fit;
}

double fit_hermite_width(const Eigen::VectorXcd& mode, int n, const FrequencyGrid& grid) {
  const HermiteFit fit = fit_hermite(mode, n, grid);
  if (fit.residual > 0.2) {
    throw ConvergenceError("mode " + std::to_string(n) + " is not Hermite-like: residual " +
                           std::to_string(fit.residual));
  }
  return fit.tau_s;
}

ZetaScaling zeta_scaling_table(const PumpSpec& base, const std::vector<double>& L_nl_list,
                               const DispersionModel& model, const FrequencyGrid& grid, int n_modes) {
  if (L_nl_list.empty()) throw ConfigError("zeta_scaling_table: empty L_nl list");
  ZetaScaling table;
  table.L_nl = L_nl_list;
  table.scaled.resize(static_cast<Eigen::Index>(L_nl_list.size()), n_modes);
  for (std::size_t i = 0; i < L_nl_list.size(); ++i) {
    PumpSpec spec = base;
    spec.L_nl = L_nl_list[i];
    const GreenPair gp = compute_green(spec, model, grid, Scheme::split_step, default_steps(Scheme::split_step, spec));
    const ModeDecomposition md = bloch_messiah(to_moving_frame(gp));
    table.scaled.row(static_cast<Eigen::Index>(i)) = spec.L_nl * md.zetas.head(n_modes).transpose();
  }
  return table;
}

}  // namespace pulsesq
