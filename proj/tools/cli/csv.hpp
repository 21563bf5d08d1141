#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace magstab::cli {

struct ResultRow {
  std::string case_id;
  double k = 0;
  std::optional<double> K;  // Lagrangian wavenumber at the reported critical stretch
  double b_bar = 0, mu_ratio = 1;
  double alpha_s = 0, beta_s = 1, alpha_u = 0, beta_u = 1, gamma_s = 1, gamma_u = 1;
  std::optional<double> lambda_cr_compression, lambda_cr_tension;
  std::string status;
  long det_evals = 0;
  std::string notes;
};

extern const char* const kCsvHeader;

ResultRow make_row(const CaseSpec& spec, const SweepRow& row, const SearchOptions& opts);

// 9 significant digits, shortest form.
std::string format_number(double v);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& is);

}  // namespace magstab::cli
