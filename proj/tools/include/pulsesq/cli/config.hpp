#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pulsesq/dispersion.hpp"
#include "pulsesq/field_grid.hpp"
#include "pulsesq/propagator.hpp"

namespace pulsesq::cli {

struct DispersionConfig {
  std::string preset = "bbo";  // bbo (Sellmeier below) | vacuum
  std::array<double, 4> sellmeier_o{2.7359, 0.01878, 0.01822, 0.01354};
  std::array<double, 4> sellmeier_e{2.3753, 0.01224, 0.01667, 0.01516};
  std::optional<double> theta_deg;  // solved when absent
  double lambda_pump_nm = 400.0;
  double lambda_signal_nm = 800.0;
};

struct GridConfig {
  int n_points = 512;
  double span = 2.0;
  std::optional<double> center;  // omega_p / 2 when absent
};

struct PumpConfig {
  double tau_p = 24.0;
  double L = 1.0;
  std::vector<double> L_nl{100.0, 1.0, 1.0 / 3.0, 1.0 / 15.0};
  std::string shape = "gaussian";
};

struct SchemeConfig {
  Scheme scheme = Scheme::split_step;
  int n_steps = 0;  // 0 = default_steps
  bool rk4_check = false;
  int rk4_steps = 0;
};

struct SweepConfig {
  std::vector<double> tau_lo{4, 5, 6, 8, 10, 12, 15, 18, 20, 25, 30, 35, 40, 50};
  int n_modes = 40;
  int fig4_modes = 3;
  int fit_modes = 3;
  std::vector<double> fig5_L_nl{100.0, 1.0 / 15.0};
  std::vector<double> fig6_L_nl{100.0, 1.0, 1.0 / 3.0, 1.0 / 5.0, 1.0 / 10.0, 1.0 / 15.0};
  std::vector<double> fig8_L_nl{0.5};
  std::vector<double> fig8_tau_lo{18.0};
  int fig8_modes = 10;
  int oracle_phases = 8;
};

struct RunConfig {
  DispersionConfig dispersion;
  GridConfig grid;
  PumpConfig pump;
  SchemeConfig scheme;
  SweepConfig sweep;
  Frame frame = Frame::moving;
  bool write_matrices = true;
  bool deterministic = true;
};

// Missing keys take defaults; unknown keys and wrong types raise ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

// FNV-1a 64 of the canonical JSON dump.
std::uint64_t config_hash(const RunConfig& cfg);
std::string hash_hex(std::uint64_t h);

DispersionModel build_model(const RunConfig& cfg);
FrequencyGrid build_grid(const RunConfig& cfg, const DispersionModel& model);
PumpSpec build_pump(const RunConfig& cfg, const DispersionModel& model, double L_nl);

}  // namespace pulsesq::cli
