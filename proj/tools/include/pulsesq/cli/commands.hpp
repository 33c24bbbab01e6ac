#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "pulsesq/cli/config.hpp"
#include "pulsesq/cli/output.hpp"
#include "pulsesq/decomposition.hpp"
#include "pulsesq/propagator.hpp"

namespace pulsesq::cli {

enum class Verb { dispersion, greens, modes, gaussian, homodyne, all };

Verb parse_verb(const std::string& s);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitConvergence = 4;

// Green pairs and decompositions computed on demand, keyed by L_nl, shared across verbs.
class Session {
 public:
  Session(RunConfig cfg, std::filesystem::path out, std::ostream* log = nullptr);

  const RunConfig& config() const { return cfg_; }
  const DispersionModel& model() const { return model_; }
  const FrequencyGrid& grid() const { return grid_; }
  const OutputMeta& meta() const { return meta_; }
  const std::filesystem::path& out() const { return out_; }

  // Lab-frame pair from the configured scheme.
  const GreenPair& green(double L_nl);
  // Decomposition in the configured frame.
  const ModeDecomposition& modes(double L_nl);

  void note(const std::string& msg);

 private:
  RunConfig cfg_;
  std::filesystem::path out_;
  std::ostream* log_;
  DispersionModel model_;
  FrequencyGrid grid_;
  OutputMeta meta_;
  std::map<double, GreenPair> greens_;
  std::map<double, ModeDecomposition> modes_;
};

void cmd_dispersion(Session& s);
void cmd_greens(Session& s);
void cmd_modes(Session& s);
void cmd_gaussian(Session& s);
void cmd_homodyne(Session& s);

void run(Verb verb, Session& s);

// Full command line entry point; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pulsesq::cli
