#include "pulsesq/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "pulsesq/errors.hpp"
#include "pulsesq/homodyne.hpp"
#include "pulsesq/perturbative.hpp"

namespace pulsesq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string tag(double L_nl) { return "L_nl_" + format_number(L_nl); }

json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

fs::path ensure_dir(const fs::path& p) {
  fs::create_directories(p);
  return p;
}

json grid_json(const FrequencyGrid& g) {
  return {{"n_points", g.n_points}, {"center", g.center}, {"spacing", g.spacing}, {"time_window", g.time_window()}};
}

json pump_json(const PumpSpec& p) {
  return {{"tau_p", p.tau_p},
          {"omega_p", p.omega_p},
          {"L_nl", number_json(p.L_nl)},
          {"L", p.L},
          {"shape", p.shape == PumpShape::gaussian ? "gaussian" : "monochromatic"}};
}

// Phase unwrapped outward from the peak sample, zero at the peak.
Eigen::VectorXd unwrapped_phase(const Eigen::VectorXcd& v) {
  const Eigen::Index n = v.size();
  Eigen::Index peak = 0;
  v.cwiseAbs().maxCoeff(&peak);
  Eigen::VectorXd ph(n);
  ph(peak) = 0.0;
  const std::complex<double> ref = std::conj(v(peak)) / std::abs(v(peak));
  auto step = [&](Eigen::Index from, Eigen::Index to) {
    const double raw = std::arg(v(to) * ref);
    double d = raw - ph(from);
    d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    ph(to) = ph(from) + d;
  };
  for (Eigen::Index j = peak + 1; j < n; ++j) step(j - 1, j);
  for (Eigen::Index j = peak - 1; j >= 0; --j) step(j + 1, j);
  return ph;
}

// Intensity-weighted least squares phase ~ a + b x + c x^2 around the grid center; returns c.
double quadratic_phase(const Eigen::VectorXcd& mode, const FrequencyGrid& grid) {
  const Eigen::VectorXd ph = unwrapped_phase(mode);
  const Eigen::VectorXd w = mode.cwiseAbs2();
  const double peak = w.maxCoeff();
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  for (int j = 0; j < grid.n_points; ++j) {
    if (w(j) < 1e-4 * peak) continue;
    const double x = grid.omega(j) - grid.center;
    const Eigen::Vector3d f(1.0, x, x * x);
    A += w(j) * f * f.transpose();
    b += w(j) * ph(j) * f;
  }
  return A.ldlt().solve(b)(2);
}

}  // namespace

Verb parse_verb(const std::string& s) {
  if (s == "dispersion") return Verb::dispersion;
  if (s == "greens") return Verb::greens;
  if (s == "modes") return Verb::modes;
  if (s == "gaussian") return Verb::gaussian;
  if (s == "homodyne") return Verb::homodyne;
  if (s == "all") return Verb::all;
  throw ConfigError("unknown verb '" + s + "'");
}

Session::Session(RunConfig cfg, fs::path out, std::ostream* log)
    : cfg_(std::move(cfg)), out_(std::move(out)), log_(log), model_(build_model(cfg_)), grid_(build_grid(cfg_, model_)) {
  meta_.config_hash = hash_hex(config_hash(cfg_));
  meta_.version = version_string();
  ensure_dir(out_);
}

void Session::note(const std::string& msg) {
  if (log_) *log_ << msg << std::endl;
}

const GreenPair& Session::green(double L_nl) {
  auto it = greens_.find(L_nl);
  if (it != greens_.end()) return it->second;
  const PumpSpec spec = build_pump(cfg_, model_, L_nl);
  const int steps = cfg_.scheme.n_steps > 0 ? cfg_.scheme.n_steps : default_steps(cfg_.scheme.scheme, spec);
  note("green " + tag(L_nl) + " " + to_string(cfg_.scheme.scheme) + " steps=" + std::to_string(steps));
  return greens_.emplace(L_nl, compute_green(spec, model_, grid_, cfg_.scheme.scheme, steps)).first->second;
}

const ModeDecomposition& Session::modes(double L_nl) {
  auto it = modes_.find(L_nl);
  if (it != modes_.end()) return it->second;
  const GreenPair& gp = green(L_nl);
  ModeDecomposition md = bloch_messiah(cfg_.frame == Frame::moving ? to_moving_frame(gp) : gp);
  return modes_.emplace(L_nl, std::move(md)).first->second;
}

void cmd_dispersion(Session& s) {
  const DispersionModel& m = s.model();
  const FrequencyGrid& g = s.grid();
  {
    CsvWriter w(s.out() / "dispersion_signal.csv", s.meta(), {"omega", "lambda_nm", "n_o", "k"});
    for (int j = 0; j < g.n_points; ++j) {
      const double om = g.omega(j);
      w.row({om, omega_to_lambda_nm(om), refractive_index(m, om, Polarization::ordinary),
             wavevector(m, om, Field::signal)});
    }
  }
  {
    CsvWriter w(s.out() / "dispersion_pump.csv", s.meta(), {"omega", "lambda_nm", "n_theta", "k_p"});
    for (int q = 0; q < g.pump_points(); ++q) {
      const double om = g.pump_omega(q);
      w.row({om, omega_to_lambda_nm(om), refractive_index(m, om, Polarization::extraordinary),
             wavevector(m, om, Field::pump)});
    }
  }
  const DispersionCoefficients c = dispersion_coefficients(m);
  {
    CsvWriter w(s.out() / "beta.csv", s.meta(), {"field", "order", "value"});
    const double sig[] = {c.beta0, c.beta1, c.beta2, c.beta3};
    const double pum[] = {c.beta0p, c.beta1p, c.beta2p, c.beta3p};
    for (int k = 0; k <= 3; ++k) w.cell(std::string("signal")).cell(k).cell(sig[k]).end_row();
    for (int k = 0; k <= 3; ++k) w.cell(std::string("pump")).cell(k).cell(pum[k]).end_row();
  }
  const double wp = m.omega_pump();
  json pm = {{"theta_rad", m.theta},
             {"theta_deg", m.theta * 180.0 / kPi},
             {"omega_p", wp},
             {"n_o_signal", refractive_index(m, wp / 2.0, Polarization::ordinary)},
             {"n_theta_pump", refractive_index(m, wp, Polarization::extraordinary)},
             {"mismatch_at_degenerate_rad_per_mm", phase_mismatch(m, wp / 2.0, wp / 2.0)},
             {"group_velocity_mismatch_fs_per_mm", c.beta1p - c.beta1}};
  write_json(s.out() / "phase_matching.json", s.meta(), pm);
  s.note("dispersion: theta = " + format_number(m.theta * 180.0 / kPi) + " deg");
}

void cmd_greens(Session& s) {
  const RunConfig& cfg = s.config();
  CsvWriter res(s.out() / "residuals.csv", s.meta(),
                {"L_nl_mm", "scheme", "n_steps", "r_unitarity", "r_symmetry", "photons", "time_window_ok"});
  std::vector<std::array<double, 4>> rk4_rows;
  for (double L_nl : cfg.pump.L_nl) {
    const GreenPair& gp = s.green(L_nl);
    const GridReport rep = validate_grid(gp.grid, gp.meta.pump.tau_p, Eigen::MatrixXcd());
    res.cell(L_nl).cell(to_string(gp.meta.scheme)).cell(gp.meta.n_steps).cell(gp.meta.r_unitarity)
        .cell(gp.meta.r_symmetry).cell(photons_from_green(gp)).cell(rep.time_window_ok ? 1 : 0).end_row();
    if (cfg.write_matrices) {
      const fs::path dir = ensure_dir(s.out() / "greens" / tag(L_nl));
      write_columns(dir / "C.csv", s.meta(), gp.grid.omegas(), gp.C);
      write_columns(dir / "S.csv", s.meta(), gp.grid.omegas(), gp.S);
      write_json(dir / "meta.json", s.meta(),
                 {{"grid", grid_json(gp.grid)},
                  {"pump", pump_json(gp.meta.pump)},
                  {"scheme", to_string(gp.meta.scheme)},
                  {"n_steps", gp.meta.n_steps},
                  {"frame", to_string(gp.frame)},
                  {"r_unitarity", gp.meta.r_unitarity},
                  {"r_symmetry", gp.meta.r_symmetry}});
    }
    if (cfg.scheme.rk4_check) {
      const int steps = cfg.scheme.rk4_steps > 0 ? cfg.scheme.rk4_steps : default_steps(Scheme::rk4, gp.meta.pump);
      s.note("rk4 check " + tag(L_nl) + " steps=" + std::to_string(steps));
      const GreenPair ref = compute_green(gp.meta.pump, s.model(), s.grid(), Scheme::rk4, steps);
      const double dC = (ref.C - gp.C).norm();
      const double dS = (ref.S - gp.S).norm();
      rk4_rows.push_back({L_nl, dC, dS, std::sqrt(dC * dC + dS * dS)});
    }
  }
  if (cfg.scheme.rk4_check) {
    CsvWriter w(s.out() / "rk4_check.csv", s.meta(), {"L_nl_mm", "frobenius_C", "frobenius_S", "frobenius_total"});
    for (const auto& r : rk4_rows) w.row({r[0], r[1], r[2], r[3]});
  }
}

void cmd_modes(Session& s) {
  const RunConfig& cfg = s.config();
  const FrequencyGrid& g = s.grid();
  const Eigen::VectorXd omegas = g.omegas();
  const double max_duration = std::max(cfg.pump.tau_p, *std::max_element(cfg.sweep.tau_lo.begin(), cfg.sweep.tau_lo.end()));

  CsvWriter fig3(s.out() / "fig3.csv", s.meta(), {"L_nl_mm", "n", "zeta", "L_nl_zeta"});
  CsvWriter conj(s.out() / "conjugacy.csv", s.meta(), {"L_nl_mm", "n", "overlap"});
  std::vector<std::string> fig4_cols{"L_nl_mm", "omega"};
  for (int n = 0; n < cfg.sweep.fig4_modes; ++n) fig4_cols.push_back("psi" + std::to_string(n) + "_abs2");
  CsvWriter fig4(s.out() / "fig4.csv", s.meta(), fig4_cols);

  for (double L_nl : cfg.pump.L_nl) {
    const ModeDecomposition& md = s.modes(L_nl);
    const int nm = std::min<int>(cfg.sweep.n_modes, static_cast<int>(md.zetas.size()));
    for (int n = 0; n < nm; ++n) fig3.row({L_nl, static_cast<double>(n), md.zetas(n), L_nl * md.zetas(n)});
    const Eigen::VectorXd ov = verify_conjugacy(md, std::min(5, nm));
    for (Eigen::Index n = 0; n < ov.size(); ++n) conj.row({L_nl, static_cast<double>(n), ov(n)});
    const int n4 = std::min(cfg.sweep.fig4_modes, nm);
    for (int j = 0; j < g.n_points; ++j) {
      fig4.cell(L_nl).cell(omegas(j));
      for (int n = 0; n < cfg.sweep.fig4_modes; ++n) fig4.cell(n < n4 ? std::norm(md.psi(j, n)) : 0.0);
      fig4.end_row();
    }

    const fs::path dir = ensure_dir(s.out() / "modes" / tag(L_nl));
    {
      CsvWriter z(dir / "zetas.csv", s.meta(), {"n", "zeta", "L_nl_zeta"});
      for (Eigen::Index n = 0; n < md.zetas.size(); ++n) z.row({static_cast<double>(n), md.zetas(n), L_nl * md.zetas(n)});
    }
    write_columns(dir / "psi.csv", s.meta(), omegas, md.psi.leftCols(nm));
    write_columns(dir / "phi.csv", s.meta(), omegas, md.phi.leftCols(nm));
    const GridReport rep = validate_grid(g, max_duration, md.psi.leftCols(std::min(nm, 10)));
    write_json(dir / "meta.json", s.meta(),
               {{"grid", grid_json(g)},
                {"pump", pump_json(md.meta.pump)},
                {"frame", to_string(md.frame)},
                {"pairing_residual", md.pairing_residual},
                {"reconstruction_C", md.reconstruction_C},
                {"reconstruction_S", md.reconstruction_S},
                {"orthonormality", md.orthonormality},
                {"photons_modes", total_photons(md)},
                {"photons_green", photons_from_green(s.green(L_nl))},
                {"grid_time_window_ok", rep.time_window_ok},
                {"grid_edge_ratio", rep.edge_ratio},
                {"grid_span_ok", rep.span_ok}});
  }

  {
    CsvWriter fig5(s.out() / "fig5.csv", s.meta(), {"L_nl_mm", "omega", "intensity", "phase_rad"});
    CsvWriter fit(s.out() / "fig5_phase_fit.csv", s.meta(), {"L_nl_mm", "inv_L_nl_per_mm", "quadratic_phase_fs2"});
    for (double L_nl : cfg.sweep.fig5_L_nl) {
      const ModeDecomposition& md = s.modes(L_nl);
      const Eigen::VectorXcd psi0 = md.psi.col(0);
      const Eigen::VectorXd ph = unwrapped_phase(psi0);
      for (int j = 0; j < g.n_points; ++j) fig5.row({L_nl, omegas(j), std::norm(psi0(j)), ph(j)});
      fit.row({L_nl, 1.0 / L_nl, quadratic_phase(psi0, g)});
    }
  }
  {
    CsvWriter fig6(s.out() / "fig6.csv", s.meta(), {"L_nl_mm", "inv_L_nl_per_mm", "n", "tau_s_fs", "fit_residual"});
    for (double L_nl : cfg.sweep.fig6_L_nl) {
      const ModeDecomposition& md = s.modes(L_nl);
      for (int n = 0; n < std::min<int>(cfg.sweep.fit_modes, static_cast<int>(md.zetas.size())); ++n) {
        const HermiteFit f = fit_hermite(md.psi.col(n), n, g);
        fig6.row({L_nl, 1.0 / L_nl, static_cast<double>(n), f.tau_s, f.residual});
      }
    }
  }
}

void cmd_gaussian(Session& s) {
  const RunConfig& cfg = s.config();
  const PumpSpec base = build_pump(cfg, s.model(), cfg.pump.L_nl.front());
  const GaussianModel gm0 = gaussian_params(base, s.model());
  write_json(s.out() / "gaussian.json", s.meta(),
             {{"delta", gm0.delta},
              {"Delta", gm0.Delta},
              {"inv_delta_fs", 1.0 / gm0.delta},
              {"inv_Delta_fs", 1.0 / gm0.Delta},
              {"r", gm0.r},
              {"tau_s_fs", gm0.tau_s},
              {"tau_p_fs", base.tau_p},
              {"L_mm", base.L}});
  CsvWriter par(s.out() / "gaussian.csv", s.meta(), {"L_nl_mm", "N", "zeta0_analytic", "zeta0_numeric", "ratio"});
  CsvWriter zs(s.out() / "gaussian_zetas.csv", s.meta(), {"L_nl_mm", "n", "zeta_analytic", "zeta_numeric", "ratio"});
  for (double L_nl : cfg.pump.L_nl) {
    const GaussianModel gm = gaussian_params(build_pump(cfg, s.model(), L_nl), s.model());
    const ModeDecomposition& md = s.modes(L_nl);
    const int nm = std::min<int>(cfg.sweep.n_modes, static_cast<int>(md.zetas.size()));
    const Eigen::VectorXd za = analytic_zetas(gm, nm);
    for (int n = 0; n < nm; ++n) zs.row({L_nl, static_cast<double>(n), za(n), md.zetas(n), za(n) / md.zetas(n)});
    par.row({L_nl, gm.N, za(0), md.zetas(0), za(0) / md.zetas(0)});
    s.note("gaussian " + tag(L_nl) + ": zeta0 analytic/numeric = " + format_number(za(0) / md.zetas(0)));
  }
}

void cmd_homodyne(Session& s) {
  const RunConfig& cfg = s.config();
  {
    CsvWriter fig7(s.out() / "fig7.csv", s.meta(),
                   {"L_nl_mm", "tau_LO_fs", "q2_min", "q2_max", "eta", "theta_opt_rad", "leakage"});
    CsvWriter fig9(s.out() / "fig9.csv", s.meta(), {"L_nl_mm", "tau_LO_fs", "eta", "degenerate"});
    for (double L_nl : cfg.pump.L_nl) {
      const std::vector<SweepRow> rows = lo_sweep(cfg.sweep.tau_lo, {s.modes(L_nl)});
      for (const SweepRow& r : rows) {
        const double eta = r.eta.degenerate ? std::nan("") : r.eta.eta;
        fig7.row({r.L_nl, r.tau_lo, r.q2_min, r.q2_max, eta, r.theta_opt, r.leakage});
        fig9.row({r.L_nl, r.tau_lo, eta, r.eta.degenerate ? 1.0 : 0.0});
      }
    }
  }
  {
    CsvWriter fig8(s.out() / "fig8.csv", s.meta(), {"L_nl_mm", "tau_LO_fs", "n", "M2", "theta_rad"});
    CsvWriter sum(s.out() / "fig8_summary.csv", s.meta(), {"L_nl_mm", "tau_LO_fs", "odd_mass", "leakage"});
    for (double L_nl : cfg.sweep.fig8_L_nl) {
      const ModeDecomposition& md = s.modes(L_nl);
      for (double tau : cfg.sweep.fig8_tau_lo) {
        const LocalOscillator lo = gaussian_lo(tau, s.model(), cfg.pump.L, s.grid(), true, md.frame);
        const LoDecomposition d = lo_decompose(lo, md);
        double odd = 0.0;
        for (Eigen::Index n = 1; n < d.M.size(); n += 2) odd += d.M(n) * d.M(n);
        for (Eigen::Index n = 0; n < std::min<Eigen::Index>(cfg.sweep.fig8_modes, d.M.size()); ++n)
          fig8.row({L_nl, tau, static_cast<double>(n), d.M(n) * d.M(n), d.theta(n)});
        sum.row({L_nl, tau, odd, d.leakage});
      }
    }
  }
  {
    CsvWriter oc(s.out() / "oracle_check.csv", s.meta(),
                 {"L_nl_mm", "tau_LO_fs", "phase_rad", "q2_modes", "q2_direct", "abs_diff"});
    double worst = 0.0;
    for (double L_nl : cfg.pump.L_nl) {
      const ModeDecomposition& md = s.modes(L_nl);
      const GreenPair& lab = s.green(L_nl);
      const GreenPair gp = md.frame == Frame::moving ? to_moving_frame(lab) : lab;
      for (double tau : cfg.sweep.tau_lo) {
        const LocalOscillator lo = gaussian_lo(tau, s.model(), cfg.pump.L, s.grid(), true, md.frame);
        const LoDecomposition d = lo_decompose(lo, md);
        for (int k = 0; k < cfg.sweep.oracle_phases; ++k) {
          const double phase = kPi * k / cfg.sweep.oracle_phases;
          const double a = quadrature_noise(d.M, d.theta, md.zetas, d.leakage, phase);
          const double b = direct_quadrature_noise(lo, gp, phase);
          worst = std::max(worst, std::abs(a - b));
          oc.row({L_nl, tau, phase, a, b, std::abs(a - b)});
        }
      }
    }
    s.note("homodyne: max |decomposition - direct| = " + format_number(worst));
  }
}

void run(Verb verb, Session& s) {
  switch (verb) {
    case Verb::dispersion: cmd_dispersion(s); break;
    case Verb::greens: cmd_greens(s); break;
    case Verb::modes: cmd_modes(s); break;
    case Verb::gaussian: cmd_gaussian(s); break;
    case Verb::homodyne: cmd_homodyne(s); break;
    case Verb::all:
      cmd_dispersion(s);
      cmd_greens(s);
      cmd_modes(s);
      cmd_gaussian(s);
      cmd_homodyne(s);
      break;
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulsed OPA squeezing: Green functions, Bloch-Messiah modes, homodyne detection"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_dir = "pulsesq_out";
  bool quiet = false;
  for (const char* name : {"dispersion", "greens", "modes", "gaussian", "homodyne", "all"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--quiet", quiet, "no progress messages");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    const Verb verb = parse_verb(app.get_subcommands().front()->get_name());
    Session s(load_config(config_path), out_dir, quiet ? nullptr : &err);
    run(verb, s);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ConvergenceError& e) {
    err << "convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace pulsesq::cli
