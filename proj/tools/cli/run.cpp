#include "cli/run.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "cli/checks.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "magstab/errors.hpp"

namespace magstab::cli {

namespace {

// Everything a flag can set; unset optionals leave the file value alone.
struct Flags {
  std::optional<std::string> config, out, reduction, convention, param, report;
  std::optional<double> k, b_bar, mu_ratio, alpha, beta, gamma;
  std::optional<double> alpha_s, beta_s, gamma_s, alpha_u, beta_u, gamma_u;
  std::optional<double> from, to, b_bar_max, lambda_min, lambda_max, scan_step, bisection_tol;
  std::optional<int> steps;
  std::optional<unsigned> threads;
  bool strict = false, log = false, fig6_both = false;
  std::string preset;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file (lower-kebab-case keys; flags override it)");
  sub->add_option("--out", f.out, "Output CSV path (default: standard output)");
  sub->add_flag("--strict", f.strict, "Exit 1 on any per-point numerical failure");
  sub->add_option("--threads", f.threads, "Worker threads (0: hardware concurrency)");
  sub->add_option("--exterior-reduction", f.reduction, "paper-12 | reduced");
  sub->add_option("--wavenumber-convention", f.convention, "eulerian | lagrangian");
  sub->add_option("--lambda-min", f.lambda_min, "Lower end of the stretch search");
  sub->add_option("--lambda-max", f.lambda_max, "Upper end of the stretch search");
  sub->add_option("--scan-step", f.scan_step, "Stretch scan step");
  sub->add_option("--bisection-tol", f.bisection_tol, "Bisection tolerance on lambda");
}

void add_material(CLI::App* sub, Flags& f) {
  sub->add_option("--k", f.k, "Eulerian wavenumber times upper-layer thickness");
  sub->add_option("--b-bar", f.b_bar, "Dimensionless Lagrangian induction");
  sub->add_option("--mu-ratio", f.mu_ratio, "Stiffness ratio mu_u / mu_s");
  sub->add_option("--alpha", f.alpha, "Magnetic alpha, both layers");
  sub->add_option("--beta", f.beta, "Magnetic beta, both layers");
  sub->add_option("--gamma", f.gamma, "Mooney-Rivlin gamma, both layers");
  sub->add_option("--alpha-s", f.alpha_s, "Substrate alpha");
  sub->add_option("--beta-s", f.beta_s, "Substrate beta");
  sub->add_option("--gamma-s", f.gamma_s, "Substrate gamma");
  sub->add_option("--alpha-u", f.alpha_u, "Upper-layer alpha");
  sub->add_option("--beta-u", f.beta_u, "Upper-layer beta");
  sub->add_option("--gamma-u", f.gamma_u, "Upper-layer gamma");
}

template <class T, class U>
void set(const std::optional<T>& v, U& target) {
  if (v) target = *v;
}

void apply_flags(RunConfig& cfg, const Flags& f) {
  auto& s = cfg.stack;
  set(f.k, cfg.k);
  set(f.b_bar, cfg.b_bar);
  set(f.mu_ratio, s.upper.mu);
  if (f.alpha) s.substrate.alpha = s.upper.alpha = *f.alpha;
  if (f.beta) s.substrate.beta = s.upper.beta = *f.beta;
  if (f.gamma) s.substrate.gamma = s.upper.gamma = *f.gamma;
  set(f.alpha_s, s.substrate.alpha);
  set(f.beta_s, s.substrate.beta);
  set(f.gamma_s, s.substrate.gamma);
  set(f.alpha_u, s.upper.alpha);
  set(f.beta_u, s.upper.beta);
  set(f.gamma_u, s.upper.gamma);
  set(f.out, cfg.out);
  set(f.threads, cfg.threads);
  if (f.strict) cfg.strict = true;
  if (f.reduction) cfg.search.exterior_reduction = parse_reduction(*f.reduction);
  if (f.convention) cfg.search.convention = parse_convention(*f.convention);
  set(f.lambda_min, cfg.search.lambda_min);
  set(f.lambda_max, cfg.search.lambda_max);
  set(f.scan_step, cfg.search.scan_step);
  set(f.bisection_tol, cfg.search.bisection_tol);
  set(f.b_bar_max, cfg.b_bar_max);
  if (f.fig6_both) cfg.fig6_both_magnetic = true;
  set(f.report, cfg.report);
  if (cfg.command == Command::Sweep) {
    if (f.param) cfg.axis.param = parse_sweep_param(*f.param);
    if (f.from) cfg.axis.from = *f.from;
    if (f.to) cfg.axis.to = *f.to;
    if (f.steps) cfg.axis.steps = *f.steps;
    if (f.log) cfg.axis.log = true;
  }
  if (cfg.command == Command::DetTrace) {
    set(f.from, cfg.trace_from);
    set(f.to, cfg.trace_to);
    set(f.steps, cfg.trace_steps);
  }
}

// Writes to the configured path, or to out when none is set.
template <class Fn>
void emit(const RunConfig& cfg, std::ostream& out, Fn&& write) {
  if (cfg.out.empty()) {
    write(out);
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open output file '" + cfg.out + "'");
  write(f);
  if (!f) throw ConfigError("failed writing '" + cfg.out + "'");
}

bool numerical_failure(const SweepRow& r) {
  return r.status == PointStatus::AdmissibilityViolated || r.status == PointStatus::NumericalInconsistency;
}

int run_cases(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto specs = build_cases(cfg);
  std::vector<SweepCase> cases;
  cases.reserve(specs.size());
  for (const auto& s : specs) cases.push_back(s.input);
  const auto rows = sweep(cases, cfg.search, cfg.threads);
  std::vector<ResultRow> table;
  int failures = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    table.push_back(make_row(specs[i], rows[i], cfg.search));
    if (numerical_failure(rows[i])) {
      ++failures;
      err << "warning: " << specs[i].case_id << ": " << to_string(rows[i].status) << ": " << rows[i].error << '\n';
    }
  }
  if (cfg.command == Command::Critical && cfg.out.empty()) {
    const ResultRow& r = table.front();
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("none"); };
    out << "lambda_cr_compression = " << opt(r.lambda_cr_compression) << '\n'
        << "lambda_cr_tension = " << opt(r.lambda_cr_tension) << '\n'
        << "K = " << opt(r.K) << '\n'
        << "status = " << r.status << '\n'
        << "det_evals = " << r.det_evals << '\n';
    if (!r.notes.empty()) out << "notes = " << r.notes << '\n';
  } else {
    emit(cfg, out, [&](std::ostream& os) { write_csv(os, table); });
  }
  return cfg.strict && failures ? kExitNumerical : kExitOk;
}

int run_trace(const RunConfig& cfg, std::ostream& out) {
  const SweepAxis ax{SweepParam::K, cfg.trace_from, cfg.trace_to, cfg.trace_steps, false};
  int failures = 0;
  emit(cfg, out, [&](std::ostream& os) {
    os << "lambda,det,sign\n";
    for (double l : ax.values()) {
      os << format_number(l) << ',';
      try {
        const ScaledDet d = det_at(cfg.stack, cfg.k, cfg.b_bar, l, cfg.search);
        os << format_number(d.value) << ',' << d.sign << '\n';
      } catch (const Error&) {
        ++failures;
        os << ",0\n";
      }
    }
  });
  return cfg.strict && failures ? kExitNumerical : kExitOk;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  VerifyOptions o;
  o.search = cfg.search;
  o.threads = cfg.threads;
  o.strict = cfg.strict;
  if (!cfg.report.empty()) o.report_path = cfg.report;
  const auto results = run_acceptance(o, &out);
  const bool ok = all_passed(results, cfg.strict);
  out << (ok ? "verify: PASS" : "verify: FAIL") << '\n';
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Critical stretch for surface instability of a two-layer magnetoelastic half-space", "magstab"};
  app.require_subcommand(1);
  Flags f;

  auto* critical = app.add_subcommand("critical", "Critical stretches at one parameter point");
  add_common(critical, f);
  add_material(critical, f);

  auto* sweep_cmd = app.add_subcommand("sweep", "Critical stretches along one parameter axis");
  add_common(sweep_cmd, f);
  add_material(sweep_cmd, f);
  sweep_cmd->add_option("--param", f.param, "k | b-bar | mu-ratio | beta (upper layer)");
  sweep_cmd->add_option("--from", f.from, "Axis start");
  sweep_cmd->add_option("--to", f.to, "Axis end");
  sweep_cmd->add_option("--steps", f.steps, "Number of grid points");
  sweep_cmd->add_flag("--log", f.log, "Logarithmic spacing");

  auto* figure = app.add_subcommand("figure", "Reproduce a figure grid");
  figure->footer(preset_help());
  figure->add_option("preset", f.preset, "fig2 .. fig9")->required();
  add_common(figure, f);
  figure->add_option("--k", f.k, "Wavenumber for presets at fixed k");
  figure->add_option("--gamma", f.gamma, "Mooney-Rivlin gamma, both layers");
  figure->add_option("--gamma-s", f.gamma_s, "Substrate gamma");
  figure->add_option("--gamma-u", f.gamma_u, "Upper-layer gamma");
  figure->add_option("--b-bar-max", f.b_bar_max, "Upper end of the induction grid");
  figure->add_flag("--fig6-both-magnetic", f.fig6_both, "fig6: magnetoelastic substrate as well");

  auto* trace = app.add_subcommand("det-trace", "Scaled determinant along lambda");
  add_common(trace, f);
  add_material(trace, f);
  trace->add_option("--from", f.from, "First lambda");
  trace->add_option("--to", f.to, "Last lambda");
  trace->add_option("--steps", f.steps, "Number of samples");

  auto* verify = app.add_subcommand("verify", "Run the built-in acceptance suite");
  add_common(verify, f);
  verify->add_option("--report", f.report, "Path of the exploratory-consistency JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const auto* s : app.get_subcommands()) target = s;
    out << target->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    const Command cmd = parse_command(sub->get_name());
    RunConfig cfg = cmd == Command::Figure ? figure_preset(f.preset) : RunConfig{};
    cfg.command = cmd;
    if (f.config) {
      cfg = load_config_file(*f.config, cfg);
      cfg.command = cmd;
      if (cmd == Command::Figure) cfg.preset = f.preset;
    }
    apply_flags(cfg, f);
    cfg.validate();
    switch (cmd) {
      case Command::DetTrace: return run_trace(cfg, out);
      case Command::Verify: return run_verify(cfg, out);
      default: return run_cases(cfg, out, err);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace magstab::cli
