#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "magstab/errors.hpp"

namespace magstab::cli {

Command parse_command(const std::string& s) {
  if (s == "critical") return Command::Critical;
  if (s == "sweep") return Command::Sweep;
  if (s == "figure") return Command::Figure;
  if (s == "det-trace") return Command::DetTrace;
  if (s == "verify") return Command::Verify;
  throw ConfigError("unknown command '" + s + "'");
}

const char* to_string(Command c) {
  switch (c) {
    case Command::Critical: return "critical";
    case Command::Sweep: return "sweep";
    case Command::Figure: return "figure";
    case Command::DetTrace: return "det-trace";
    case Command::Verify: return "verify";
  }
  return "?";
}

SweepParam parse_sweep_param(const std::string& s) {
  if (s == "k") return SweepParam::K;
  if (s == "b-bar" || s == "b_bar") return SweepParam::BBar;
  if (s == "mu-ratio" || s == "mu_ratio") return SweepParam::MuRatio;
  if (s == "beta") return SweepParam::Beta;
  throw ConfigError("unknown sweep parameter '" + s + "' (expected k, b-bar, mu-ratio or beta)");
}

const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::K: return "k";
    case SweepParam::BBar: return "b-bar";
    case SweepParam::MuRatio: return "mu-ratio";
    case SweepParam::Beta: return "beta";
  }
  return "?";
}

ExteriorReduction parse_reduction(const std::string& s) {
  if (s == "paper-12") return ExteriorReduction::Paper12;
  if (s == "reduced") return ExteriorReduction::Reduced;
  throw ConfigError("exterior reduction must be paper-12 or reduced, got '" + s + "'");
}

WavenumberConvention parse_convention(const std::string& s) {
  if (s == "eulerian" || s == "eulerian-fixed") return WavenumberConvention::EulerianFixed;
  if (s == "lagrangian" || s == "lagrangian-fixed") return WavenumberConvention::LagrangianFixed;
  throw ConfigError("wavenumber convention must be eulerian or lagrangian, got '" + s + "'");
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v;
  v.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    v.push_back(log ? std::exp(std::log(from) + t * (std::log(to) - std::log(from))) : from + t * (to - from));
  }
  if (!v.empty()) v.back() = to;
  return v;
}

SweepAxis AxisSpec::resolve() const {
  std::string missing;
  if (!param) missing += " --param";
  if (!from) missing += " --from";
  if (!to) missing += " --to";
  if (!steps) missing += " --steps";
  if (!missing.empty()) throw ConfigError("sweep axis incomplete, missing" + missing);
  return {*param, *from, *to, *steps, log};
}

void RunConfig::validate() const {
  try {
    stack.substrate.validate();
    stack.upper.validate();
    search.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (!(k > 0)) throw ConfigError("k must be positive");
  if (!(b_bar >= 0)) throw ConfigError("b-bar must be non-negative");
  if (command == Command::Sweep) {
    const SweepAxis ax = axis.resolve();
    if (ax.steps < 2) throw ConfigError("sweep needs at least 2 steps");
    if (ax.log && !(ax.from > 0 && ax.to > 0)) throw ConfigError("log sweep needs positive bounds");
  }
  if (command == Command::Figure) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), preset) == names.end())
      throw ConfigError("unknown figure preset '" + preset + "'");
  }
  if (command == Command::DetTrace && trace_steps < 2) throw ConfigError("det-trace needs at least 2 steps");
  if (!(b_bar_max > 0)) throw ConfigError("b-bar-max must be positive");
}

namespace {

double num(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, v] : j.items()) {
    auto& s = cfg.stack;
    if (key == "command") cfg.command = parse_command(v.get<std::string>());
    else if (key == "k") cfg.k = num(v, key);
    else if (key == "b-bar") cfg.b_bar = num(v, key);
    else if (key == "mu-ratio") s.upper.mu = num(v, key);
    else if (key == "alpha") s.substrate.alpha = s.upper.alpha = num(v, key);
    else if (key == "beta") s.substrate.beta = s.upper.beta = num(v, key);
    else if (key == "gamma") s.substrate.gamma = s.upper.gamma = num(v, key);
    else if (key == "alpha-s") s.substrate.alpha = num(v, key);
    else if (key == "beta-s") s.substrate.beta = num(v, key);
    else if (key == "gamma-s") s.substrate.gamma = num(v, key);
    else if (key == "alpha-u") s.upper.alpha = num(v, key);
    else if (key == "beta-u") s.upper.beta = num(v, key);
    else if (key == "gamma-u") s.upper.gamma = num(v, key);
    else if (key == "param") cfg.axis.param = parse_sweep_param(v.get<std::string>());
    else if (key == "from") cfg.axis.from = num(v, key);
    else if (key == "to") cfg.axis.to = num(v, key);
    else if (key == "steps") cfg.axis.steps = v.get<int>();
    else if (key == "log") cfg.axis.log = v.get<bool>();
    else if (key == "preset") cfg.preset = v.get<std::string>();
    else if (key == "b-bar-max") cfg.b_bar_max = num(v, key);
    else if (key == "fig6-both-magnetic") cfg.fig6_both_magnetic = v.get<bool>();
    else if (key == "out") cfg.out = v.get<std::string>();
    else if (key == "strict") cfg.strict = v.get<bool>();
    else if (key == "threads") cfg.threads = v.get<unsigned>();
    else if (key == "lambda-min") cfg.search.lambda_min = num(v, key);
    else if (key == "lambda-max") cfg.search.lambda_max = num(v, key);
    else if (key == "scan-step") cfg.search.scan_step = num(v, key);
    else if (key == "bisection-tol") cfg.search.bisection_tol = num(v, key);
    else if (key == "coincidence-tol") cfg.search.coincidence_tol = num(v, key);
    else if (key == "exterior-reduction") cfg.search.exterior_reduction = parse_reduction(v.get<std::string>());
    else if (key == "wavenumber-convention") cfg.search.convention = parse_convention(v.get<std::string>());
    else if (key == "trace-from") cfg.trace_from = num(v, key);
    else if (key == "trace-to") cfg.trace_to = num(v, key);
    else if (key == "trace-steps") cfg.trace_steps = v.get<int>();
    else if (key == "report") cfg.report = v.get<std::string>();
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    apply_json(base, j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return base;
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

std::string preset_help() {
  return "Figure presets (k = 1 unless noted, gamma = 1 in both layers):\n"
         "  fig2  B = 0, both layers (alpha, beta) = (0, 1), ratios 0.5 1 2 5 10, k log-grid [0.1, 20]\n"
         "  fig3  identical layers, alpha = 0.5, beta 0 0.5 1 2 5, B in [0, b-bar-max]\n"
         "  fig4  substrate (0, 1) non-magnetizable, upper alpha = 0.5, beta 0 0.5 1 2 5, ratio 1\n"
         "  fig5  as fig4 with ratio 5\n"
         "  fig6  upper (0.5, 0.5), substrate (0, 1) [--fig6-both-magnetic: (0.5, 0.5) in both],\n"
         "        B 0 0.5 1 2 5, ratio log-grid [0.1, 100]\n"
         "  fig7  both layers (0.5, 0.5), ratios 0.5 1 2 5 10, B in [0, b-bar-max]\n"
         "  fig8  as fig7 with beta = 1\n"
         "  fig9  as fig6 with (0.5, 0.5) in both layers\n"
         "Non-magnetizable substrates use (alpha, beta) = (0, 1), i.e. B = H.\n";
}

RunConfig figure_preset(const std::string& name) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ConfigError("unknown figure preset '" + name + "'");
  RunConfig cfg;
  cfg.command = Command::Figure;
  cfg.preset = name;
  cfg.k = 1.0;
  return cfg;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) { return SweepAxis{SweepParam::K, a, b, n, false}.values(); }
std::vector<double> logspace(double a, double b, int n) { return SweepAxis{SweepParam::K, a, b, n, true}.values(); }

constexpr double kBetas[5] = {0, 0.5, 1, 2, 5};
constexpr double kRatios[5] = {0.5, 1, 2, 5, 10};
constexpr double kFieldLevels[5] = {0, 0.5, 1, 2, 5};

std::vector<CaseSpec> preset_cases(const RunConfig& cfg) {
  const std::string& n = cfg.preset;
  const double g_s = cfg.stack.substrate.gamma, g_u = cfg.stack.upper.gamma;
  std::vector<CaseSpec> out;
  auto add = [&](const std::string& series, const std::string& x, MaterialParams sub, MaterialParams up, double k,
                 double b) {
    sub.gamma = g_s;
    up.gamma = g_u;
    out.push_back({n + ":" + series + ":" + x, {{sub, up}, k, b}});
  };
  const auto bgrid = linspace(0, cfg.b_bar_max, 21);
  if (n == "fig2") {
    for (double ratio : kRatios)
      for (double k : logspace(0.1, 20, 25))
        add("mu_ratio=" + fmt(ratio), "k=" + fmt(k), non_magnetizable(), non_magnetizable(ratio), k, 0);
  } else if (n == "fig3") {
    for (double be : kBetas)
      for (double b : bgrid) add("beta=" + fmt(be), "b_bar=" + fmt(b), {1, 1, 0.5, be}, {1, 1, 0.5, be}, cfg.k, b);
  } else if (n == "fig4" || n == "fig5") {
    const double ratio = n == "fig4" ? 1.0 : 5.0;
    for (double be : kBetas)
      for (double b : bgrid)
        add("beta=" + fmt(be), "b_bar=" + fmt(b), non_magnetizable(), {ratio, 1, 0.5, be}, cfg.k, b);
  } else if (n == "fig6" || n == "fig9") {
    const bool both = n == "fig9" || cfg.fig6_both_magnetic;
    for (double b : kFieldLevels)
      for (double ratio : logspace(0.1, 100, 31))
        add("b_bar=" + fmt(b), "mu_ratio=" + fmt(ratio), both ? MaterialParams{1, 1, 0.5, 0.5} : non_magnetizable(),
            {ratio, 1, 0.5, 0.5}, cfg.k, b);
  } else if (n == "fig7" || n == "fig8") {
    const double be = n == "fig7" ? 0.5 : 1.0;
    for (double ratio : kRatios)
      for (double b : bgrid)
        add("mu_ratio=" + fmt(ratio), "b_bar=" + fmt(b), {1, 1, 0.5, be}, {ratio, 1, 0.5, be}, cfg.k, b);
  }
  return out;
}

}  // namespace

std::vector<CaseSpec> build_cases(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Figure:
      return preset_cases(cfg);
    case Command::Sweep: {
      std::vector<CaseSpec> out;
      int i = 0;
      const SweepAxis ax = cfg.axis.resolve();
      for (double v : ax.values()) {
        SweepCase c{cfg.stack, cfg.k, cfg.b_bar};
        switch (ax.param) {
          case SweepParam::K: c.k = v; break;
          case SweepParam::BBar: c.b_bar = v; break;
          case SweepParam::MuRatio: c.stack.upper.mu = v; break;
          case SweepParam::Beta: c.stack.upper.beta = v; break;
        }
        out.push_back({"sweep:" + std::string(to_string(ax.param)) + "=" + fmt(v) + ":" + std::to_string(i++), c});
      }
      return out;
    }
    default:
      return {{"critical", {cfg.stack, cfg.k, cfg.b_bar}}};
  }
}

}  // namespace magstab::cli
