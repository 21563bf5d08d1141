#include "cli/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace magstab::cli {

const char* const kCsvHeader =
    "case_id,k,K,b_bar,mu_ratio,alpha_s,beta_s,alpha_u,beta_u,gamma_s,gamma_u,"
    "lambda_cr_compression,lambda_cr_tension,status,det_evals,notes";

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

// Notes never carry separators that would break the row.
std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '"', '\'');
  return s;
}

}  // namespace

ResultRow make_row(const CaseSpec& spec, const SweepRow& row, const SearchOptions& opts) {
  const auto& st = spec.input.stack;
  ResultRow r;
  r.case_id = spec.case_id;
  r.k = spec.input.k;
  r.b_bar = spec.input.b_bar;
  r.mu_ratio = st.upper.mu / st.substrate.mu;
  r.alpha_s = st.substrate.alpha;
  r.beta_s = st.substrate.beta;
  r.alpha_u = st.upper.alpha;
  r.beta_u = st.upper.beta;
  r.gamma_s = st.substrate.gamma;
  r.gamma_u = st.upper.gamma;
  r.lambda_cr_compression = row.result.lambda_cr_compression;
  r.lambda_cr_tension = row.result.lambda_cr_tension;
  const std::optional<double> ref = r.lambda_cr_compression ? r.lambda_cr_compression : r.lambda_cr_tension;
  if (opts.convention == WavenumberConvention::LagrangianFixed) r.K = r.k;
  else if (ref) r.K = *ref * r.k;
  r.status = to_string(row.status);
  r.det_evals = row.result.det_evals;

  std::ostringstream notes;
  const auto& res = row.result;
  const long artifacts = std::count_if(res.crossings.begin(), res.crossings.end(), [](const Crossing& c) { return c.artifact; });
  const char* sep = "";
  auto add = [&](const std::string& s) {
    notes << sep << s;
    sep = ";";
  };
  if (artifacts) add("artifact-crossings=" + std::to_string(artifacts));
  if (std::any_of(res.crossings.begin(), res.crossings.end(), [](const Crossing& c) { return c.from_dip && !c.artifact; }))
    add("dip-refined");
  if (!res.perturbations.empty()) add("lambda-nudges=" + std::to_string(res.perturbations.size()));
  if (!res.even_multiplicity.empty()) {
    std::string s = "even-root-suspects=";
    for (size_t i = 0; i < res.even_multiplicity.size(); ++i)
      s += (i ? " " : "") + format_number(res.even_multiplicity[i]);
    add(s);
  }
  if (!row.error.empty()) add(row.error);
  r.notes = sanitize(notes.str());
  return r;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.case_id << ',' << format_number(r.k) << ',' << opt(r.K) << ',' << format_number(r.b_bar) << ','
       << format_number(r.mu_ratio) << ',' << format_number(r.alpha_s) << ',' << format_number(r.beta_s) << ','
       << format_number(r.alpha_u) << ',' << format_number(r.beta_u) << ',' << format_number(r.gamma_s) << ','
       << format_number(r.gamma_u) << ',' << opt(r.lambda_cr_compression) << ',' << opt(r.lambda_cr_tension) << ','
       << r.status << ',' << r.det_evals << ',' << r.notes << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

}  // namespace

std::vector<ResultRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw ConfigError("CSV header mismatch");
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 16) throw ConfigError("CSV row has " + std::to_string(f.size()) + " fields, expected 16");
    ResultRow r;
    r.case_id = f[0];
    r.k = std::stod(f[1]);
    r.K = parse_opt(f[2]);
    r.b_bar = std::stod(f[3]);
    r.mu_ratio = std::stod(f[4]);
    r.alpha_s = std::stod(f[5]);
    r.beta_s = std::stod(f[6]);
    r.alpha_u = std::stod(f[7]);
    r.beta_u = std::stod(f[8]);
    r.gamma_s = std::stod(f[9]);
    r.gamma_u = std::stod(f[10]);
    r.lambda_cr_compression = parse_opt(f[11]);
    r.lambda_cr_tension = parse_opt(f[12]);
    r.status = f[13];
    r.det_evals = std::stol(f[14]);
    r.notes = f[15];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace magstab::cli
