#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "pulsesq/cli/commands.hpp"
#include "pulsesq/cli/config.hpp"
#include "pulsesq/errors.hpp"

using namespace pulsesq;
using namespace pulsesq::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pulsesq_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_json(const fs::path& dir, const json& j) {
  const fs::path p = dir / "run.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

int invoke(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "pulsesq");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

json tiny_config() {
  return json::parse(R"({
    "grid": {"n_points": 32, "span": 0.5},
    "pump": {"L_nl": [100, 1]},
    "sweep": {"tau_lo": [15, 25], "n_modes": 8, "fig5_L_nl": [100], "fig6_L_nl": [100, 1],
              "fig8_L_nl": [1], "fig8_tau_lo": [20], "fig8_modes": 4, "oracle_phases": 4}
  })");
}

}  // namespace

TEST(Config, DefaultsAndRoundTrip) {
  const RunConfig d = parse_config(json::object());
  EXPECT_EQ(d.grid.n_points, 512);
  EXPECT_DOUBLE_EQ(d.grid.span, 2.0);
  EXPECT_DOUBLE_EQ(d.pump.tau_p, 24.0);
  EXPECT_EQ(d.pump.L_nl.size(), 4u);
  EXPECT_EQ(d.frame, Frame::moving);
  const RunConfig r = parse_config(to_json(d));
  EXPECT_EQ(config_hash(r), config_hash(d));
  EXPECT_EQ(hash_hex(config_hash(d)).size(), 16u);
}

TEST(Config, HashFollowsContent) {
  json j = tiny_config();
  const std::uint64_t a = config_hash(parse_config(j));
  j["pump"]["tau_p"] = 25.0;
  EXPECT_NE(config_hash(parse_config(j)), a);
  // Key order in the input does not matter.
  const json k = json::parse(R"({"pump": {"L_nl": [100, 1]}, "grid": {"span": 0.5, "n_points": 32},
    "sweep": {"n_modes": 8, "tau_lo": [15, 25], "fig5_L_nl": [100], "fig6_L_nl": [100, 1],
              "fig8_L_nl": [1], "fig8_tau_lo": [20], "fig8_modes": 4, "oracle_phases": 4}})");
  EXPECT_EQ(config_hash(parse_config(k)), a);
}

TEST(Config, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(parse_config(json::parse(R"({"grid": {"points": 64}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"colour": 1})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"grid": {"n_points": "many"}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"pump": {"L_nl": 3}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"scheme": {"name": "euler"}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"dispersion": {"preset": "quartz"}})")), ConfigError);
  const RunConfig c = parse_config(json::parse(R"({"pump": {"L_nl": ["inf", 2]}})"));
  EXPECT_TRUE(std::isinf(c.pump.L_nl[0]));
  EXPECT_DOUBLE_EQ(c.pump.L_nl[1], 2.0);
}

TEST(Config, BuildsModelGridAndPump) {
  const RunConfig c = parse_config(tiny_config());
  const DispersionModel m = build_model(c);
  EXPECT_NEAR(m.theta * 180.0 / kPi, 29.178, 1e-3);
  const FrequencyGrid g = build_grid(c, m);
  EXPECT_EQ(g.n_points, 32);
  EXPECT_DOUBLE_EQ(g.center, m.omega_pump() / 2.0);
  EXPECT_DOUBLE_EQ(build_pump(c, m, 1.0).L_nl, 1.0);
  RunConfig v = parse_config(json::parse(R"({"dispersion": {"preset": "vacuum"}})"));
  EXPECT_EQ(build_model(v).theta, 0.0);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("codes");
  EXPECT_EQ(invoke({}), kExitConfig);
  EXPECT_EQ(invoke({"modes"}), kExitConfig);
  EXPECT_EQ(invoke({"fly", "--config", "x.json"}), kExitConfig);
  EXPECT_EQ(invoke({"modes", "--config", (dir / "missing.json").string(), "--out", dir.string()}), kExitConfig);

  std::string err;
  const fs::path bad = write_json(dir, json::parse(R"({"grid": {"n_points": 32, "spam": 1}})"));
  EXPECT_EQ(invoke({"greens", "--config", bad.string(), "--out", (dir / "o").string()}, &err), kExitConfig);
  EXPECT_NE(err.find("spam"), std::string::npos) << err;

  // 32 points over 0.05 rad/fs cannot hold a 24 fs pump.
  const fs::path narrow = write_json(dir, json::parse(R"({"grid": {"n_points": 32, "span": 0.05}})"));
  EXPECT_EQ(invoke({"greens", "--config", narrow.string(), "--out", (dir / "o").string()}), kExitConfig);

  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_EQ(invoke({"greens", "--config", (dir / "broken.json").string(), "--out", (dir / "o").string()}),
            kExitConfig);
}

TEST(Cli, VacuumRun) {
  const fs::path dir = scratch("vacuum");
  json j = json::parse(R"({
    "dispersion": {"preset": "vacuum"},
    "grid": {"n_points": 32, "span": 0.5},
    "pump": {"L_nl": ["inf"]},
    "sweep": {"tau_lo": [20], "n_modes": 4, "fig5_L_nl": ["inf"], "fig6_L_nl": ["inf"], "fig8_L_nl": ["inf"],
              "fig8_tau_lo": [20], "fig8_modes": 4, "oracle_phases": 4}
  })");
  const fs::path cfg = write_json(dir, j);
  std::string err;
  ASSERT_EQ(invoke({"greens", "--config", cfg.string(), "--out", (dir / "o").string(), "--quiet"}, &err), kExitOk)
      << err;
  EXPECT_TRUE(fs::exists(dir / "o" / "residuals.csv"));
}

TEST(Cli, FullRunIsByteIdenticalAndTagged) {
  const fs::path dir = scratch("full");
  const json j = tiny_config();
  const fs::path cfg = write_json(dir, j);
  std::string err;
  ASSERT_EQ(invoke({"all", "--config", cfg.string(), "--out", (dir / "a").string(), "--quiet"}, &err), kExitOk)
      << err;
  ASSERT_EQ(invoke({"all", "--config", cfg.string(), "--out", (dir / "b").string(), "--quiet"}, &err), kExitOk)
      << err;
  const auto a = snapshot(dir / "a");
  const auto b = snapshot(dir / "b");
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a.size(), b.size());
  for (const auto& [name, bytes] : a) {
    ASSERT_TRUE(b.count(name)) << name;
    EXPECT_TRUE(bytes == b.at(name)) << name;
  }
  for (const char* f : {"beta.csv", "phase_matching.json", "residuals.csv", "fig3.csv", "fig4.csv", "fig5.csv",
                        "fig6.csv", "fig7.csv", "fig8.csv", "fig9.csv", "gaussian.json", "oracle_check.csv"}) {
    EXPECT_TRUE(a.count(f)) << f;
  }
  const std::string tag = hash_hex(config_hash(parse_config(j)));
  EXPECT_NE(a.at("fig7.csv").find("# config_hash " + tag), std::string::npos);
  EXPECT_EQ(a.at("fig7.csv").rfind("# pulsesq ", 0), 0u);
  EXPECT_NE(a.at("gaussian.json").find(tag), std::string::npos);
}
