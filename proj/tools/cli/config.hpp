#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "magstab/dispersion.hpp"

namespace magstab::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { Critical, Sweep, Figure, DetTrace, Verify };
enum class SweepParam { K, BBar, MuRatio, Beta };

Command parse_command(const std::string& s);
SweepParam parse_sweep_param(const std::string& s);
ExteriorReduction parse_reduction(const std::string& s);
WavenumberConvention parse_convention(const std::string& s);
const char* to_string(Command c);
const char* to_string(SweepParam p);

struct SweepAxis {
  SweepParam param = SweepParam::BBar;
  double from = 0, to = 1;
  int steps = 2;
  bool log = false;
  std::vector<double> values() const;
};

// Sweep axis as given on the command line or in a config file; every field
// except log is required.
struct AxisSpec {
  std::optional<SweepParam> param;
  std::optional<double> from, to;
  std::optional<int> steps;
  bool log = false;

  SweepAxis resolve() const;  // throws ConfigError naming the missing fields
};

struct RunConfig {
  Command command = Command::Critical;
  LayerStack stack{non_magnetizable(), non_magnetizable()};
  double k = 1.0;
  double b_bar = 0.0;
  AxisSpec axis;
  std::string preset;          // fig2 .. fig9
  double b_bar_max = 2.0;      // upper end of the induction grid for fig3-5, fig7, fig8
  bool fig6_both_magnetic = false;
  std::string out;
  SearchOptions search;
  bool strict = false;
  unsigned threads = 0;        // 0: hardware concurrency
  // det-trace range
  double trace_from = 0.3, trace_to = 1.5;
  int trace_steps = 121;
  std::string report;          // verify: exploratory report path

  void validate() const;
};

// Applies the keys of a JSON object onto cfg. Keys are the lower-kebab-case
// flag names (k, b-bar, mu-ratio, alpha, beta-u, exterior-reduction, ...).
void apply_json(RunConfig& cfg, const nlohmann::json& j);
RunConfig load_config_file(const std::string& path, RunConfig base = {});

struct CaseSpec {
  std::string case_id;
  SweepCase input;
};

RunConfig figure_preset(const std::string& name);
std::vector<std::string> preset_names();
std::string preset_help();

// Expands critical / sweep / figure configurations into cases, in grid order.
std::vector<CaseSpec> build_cases(const RunConfig& cfg);

}  // namespace magstab::cli
