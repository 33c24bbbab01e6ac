#include "pulsesq/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "pulsesq/errors.hpp"

namespace pulsesq::cli {

namespace {

using nlohmann::json;

class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError("config: '" + name_ + "' must be an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) out = number(*v, key);
  }

  void read(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError("config: " + where(key) + " must be an integer");
      out = v->get<int>();
    }
  }

  void read(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError("config: " + where(key) + " must be a boolean");
      out = v->get<bool>();
    }
  }

  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError("config: " + where(key) + " must be a string");
      out = v->get<std::string>();
    }
  }

  void read(const std::string& key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
      } else {
        out = number(*v, key);
      }
    }
  }

  void read(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError("config: " + where(key) + " must be an array");
      out.clear();
      for (const json& e : *v) out.push_back(number(e, key));
    }
  }

  void read(const std::string& key, std::array<double, 4>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != 4) throw ConfigError("config: " + where(key) + " needs 4 numbers");
      for (std::size_t i = 0; i < 4; ++i) out[i] = number((*v)[i], key);
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("config: unknown key " + where(it.key()));
    }
  }

 private:
  // "inf" is accepted for infinite nonlinear lengths.
  double number(const json& v, const std::string& key) const {
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw ConfigError("config: " + where(key) + " must be a number");
  }

  std::string where(const std::string& key) const { return name_.empty() ? "'" + key + "'" : "'" + name_ + "." + key + "'"; }

  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

json number_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

json list_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_json(x));
  return a;
}

void positive(const std::vector<double>& v, const std::string& what) {
  if (v.empty()) throw ConfigError("config: " + what + " is empty");
  for (double x : v)
    if (!(x > 0.0)) throw ConfigError("config: " + what + " entries must be positive");
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  Section top(j, "");

  if (const json* d = top.find("dispersion")) {
    Section s(*d, "dispersion");
    s.read("preset", cfg.dispersion.preset);
    s.read("sellmeier_o", cfg.dispersion.sellmeier_o);
    s.read("sellmeier_e", cfg.dispersion.sellmeier_e);
    s.read("theta_deg", cfg.dispersion.theta_deg);
    s.read("lambda_pump_nm", cfg.dispersion.lambda_pump_nm);
    s.read("lambda_signal_nm", cfg.dispersion.lambda_signal_nm);
    s.finish();
  }
  if (const json* g = top.find("grid")) {
    Section s(*g, "grid");
    s.read("n_points", cfg.grid.n_points);
    s.read("span", cfg.grid.span);
    s.read("center", cfg.grid.center);
    s.finish();
  }
  if (const json* p = top.find("pump")) {
    Section s(*p, "pump");
    s.read("tau_p", cfg.pump.tau_p);
    s.read("L", cfg.pump.L);
    s.read("L_nl", cfg.pump.L_nl);
    s.read("shape", cfg.pump.shape);
    s.finish();
  }
  if (const json* p = top.find("scheme")) {
    Section s(*p, "scheme");
    std::string name = to_string(cfg.scheme.scheme);
    s.read("name", name);
    if (name == "split_step") {
      cfg.scheme.scheme = Scheme::split_step;
    } else if (name == "rk4") {
      cfg.scheme.scheme = Scheme::rk4;
    } else {
      throw ConfigError("config: unknown scheme '" + name + "'");
    }
    s.read("n_steps", cfg.scheme.n_steps);
    s.read("rk4_check", cfg.scheme.rk4_check);
    s.read("rk4_steps", cfg.scheme.rk4_steps);
    s.finish();
  }
  if (const json* w = top.find("sweep")) {
    Section s(*w, "sweep");
    s.read("tau_lo", cfg.sweep.tau_lo);
    s.read("n_modes", cfg.sweep.n_modes);
    s.read("fig4_modes", cfg.sweep.fig4_modes);
    s.read("fit_modes", cfg.sweep.fit_modes);
    s.read("fig5_L_nl", cfg.sweep.fig5_L_nl);
    s.read("fig6_L_nl", cfg.sweep.fig6_L_nl);
    s.read("fig8_L_nl", cfg.sweep.fig8_L_nl);
    s.read("fig8_tau_lo", cfg.sweep.fig8_tau_lo);
    s.read("fig8_modes", cfg.sweep.fig8_modes);
    s.read("oracle_phases", cfg.sweep.oracle_phases);
    s.finish();
  }
  std::string frame = to_string(cfg.frame);
  top.read("frame", frame);
  if (frame == "lab") {
    cfg.frame = Frame::lab;
  } else if (frame == "moving") {
    cfg.frame = Frame::moving;
  } else {
    throw ConfigError("config: unknown frame '" + frame + "'");
  }
  top.read("write_matrices", cfg.write_matrices);
  top.read("deterministic", cfg.deterministic);
  top.finish();

  const std::string& preset = cfg.dispersion.preset;
  if (preset != "bbo" && preset != "vacuum") {
    throw ConfigError("config: unknown dispersion preset '" + preset + "'");
  }
  if (cfg.pump.shape != "gaussian" && cfg.pump.shape != "monochromatic") {
    throw ConfigError("config: unknown pump shape '" + cfg.pump.shape + "'");
  }
  if (cfg.grid.n_points < 4 || (cfg.grid.n_points & (cfg.grid.n_points - 1)) != 0) {
    throw ConfigError("config: grid.n_points must be a power of two >= 4");
  }
  if (!(cfg.grid.span > 0.0)) throw ConfigError("config: grid.span must be positive");
  if (!(cfg.pump.tau_p > 0.0) || !(cfg.pump.L > 0.0)) throw ConfigError("config: pump.tau_p and pump.L must be positive");
  if (cfg.scheme.n_steps < 0 || cfg.scheme.rk4_steps < 0) throw ConfigError("config: step counts must be >= 0");
  positive(cfg.pump.L_nl, "pump.L_nl");
  positive(cfg.sweep.tau_lo, "sweep.tau_lo");
  for (const auto* v : {&cfg.sweep.fig5_L_nl, &cfg.sweep.fig6_L_nl, &cfg.sweep.fig8_L_nl, &cfg.sweep.fig8_tau_lo}) {
    for (double x : *v)
      if (!(x > 0.0)) throw ConfigError("config: sweep lists must hold positive values");
  }
  if (cfg.sweep.n_modes < 1 || cfg.sweep.fig4_modes < 0 || cfg.sweep.fit_modes < 0 || cfg.sweep.fig8_modes < 1 ||
      cfg.sweep.oracle_phases < 1) {
    throw ConfigError("config: sweep mode counts out of range");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& cfg) {
  json j;
  json d;
  d["preset"] = cfg.dispersion.preset;
  d["sellmeier_o"] = cfg.dispersion.sellmeier_o;
  d["sellmeier_e"] = cfg.dispersion.sellmeier_e;
  d["theta_deg"] = cfg.dispersion.theta_deg ? json(*cfg.dispersion.theta_deg) : json(nullptr);
  d["lambda_pump_nm"] = cfg.dispersion.lambda_pump_nm;
  d["lambda_signal_nm"] = cfg.dispersion.lambda_signal_nm;
  j["dispersion"] = d;

  j["grid"] = {{"n_points", cfg.grid.n_points},
               {"span", cfg.grid.span},
               {"center", cfg.grid.center ? json(*cfg.grid.center) : json(nullptr)}};
  j["pump"] = {{"tau_p", cfg.pump.tau_p}, {"L", cfg.pump.L}, {"L_nl", list_json(cfg.pump.L_nl)}, {"shape", cfg.pump.shape}};
  j["scheme"] = {{"name", to_string(cfg.scheme.scheme)},
                 {"n_steps", cfg.scheme.n_steps},
                 {"rk4_check", cfg.scheme.rk4_check},
                 {"rk4_steps", cfg.scheme.rk4_steps}};
  j["sweep"] = {{"tau_lo", list_json(cfg.sweep.tau_lo)},
                {"n_modes", cfg.sweep.n_modes},
                {"fig4_modes", cfg.sweep.fig4_modes},
                {"fit_modes", cfg.sweep.fit_modes},
                {"fig5_L_nl", list_json(cfg.sweep.fig5_L_nl)},
                {"fig6_L_nl", list_json(cfg.sweep.fig6_L_nl)},
                {"fig8_L_nl", list_json(cfg.sweep.fig8_L_nl)},
                {"fig8_tau_lo", list_json(cfg.sweep.fig8_tau_lo)},
                {"fig8_modes", cfg.sweep.fig8_modes},
                {"oracle_phases", cfg.sweep.oracle_phases}};
  j["frame"] = to_string(cfg.frame);
  j["write_matrices"] = cfg.write_matrices;
  j["deterministic"] = cfg.deterministic;
  return j;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string s = to_json(cfg).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

DispersionModel build_model(const RunConfig& cfg) {
  const DispersionConfig& d = cfg.dispersion;
  DispersionModel m;
  if (d.preset == "vacuum") {
    m = DispersionModel::vacuum();
  } else {
    const auto& o = d.sellmeier_o;
    const auto& e = d.sellmeier_e;
    m.sellmeier_o = {o[0], o[1], o[2], o[3]};
    m.sellmeier_e = {e[0], e[1], e[2], e[3]};
  }
  m.lambda_pump = d.lambda_pump_nm;
  m.lambda_signal = d.lambda_signal_nm;
  if (d.theta_deg) {
    m.theta = *d.theta_deg * kPi / 180.0;
  } else if (d.preset != "vacuum") {
    m.theta = find_phase_matching_angle(m);
  }
  return m;
}

FrequencyGrid build_grid(const RunConfig& cfg, const DispersionModel& model) {
  const double center = cfg.grid.center ? *cfg.grid.center : model.omega_pump() / 2.0;
  return make_grid(cfg.grid.n_points, center, cfg.grid.span);
}

PumpSpec build_pump(const RunConfig& cfg, const DispersionModel& model, double L_nl) {
  PumpSpec p = default_pump(model, L_nl);
  p.tau_p = cfg.pump.tau_p;
  p.L = cfg.pump.L;
  p.shape = cfg.pump.shape == "monochromatic" ? PumpShape::monochromatic : PumpShape::gaussian;
  p.validate();
  return p;
}

}  // namespace pulsesq::cli
