#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "magstab/dispersion.hpp"

namespace magstab::cli {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool advisory = false;  // failure only counts in strict mode
  std::string detail;
};

struct VerifyOptions {
  SearchOptions search;
  unsigned threads = 0;
  bool strict = false;
  std::string report_path = "exploratory_report.json";
};

inline constexpr double kBiot = 0.5437;

CheckResult check_biot(const VerifyOptions& o);
CheckResult check_ratio_golden(const VerifyOptions& o);
CheckResult check_magnetic_anchor(const VerifyOptions& o);
CheckResult check_moduli_gate(const VerifyOptions& o);
CheckResult check_factorization_gate(const VerifyOptions& o);
CheckResult check_structural(const VerifyOptions& o);
CheckResult check_exploratory(const VerifyOptions& o);

std::vector<CheckResult> run_acceptance(const VerifyOptions& o, std::ostream* progress = nullptr);

// One "criterion N: PASS|FAIL|ADVISORY-FAIL name (detail)" line.
std::string format_line(const CheckResult& r);

// True when every criterion passed, advisory ones counting only under strict.
bool all_passed(const std::vector<CheckResult>& results, bool strict);

// Block determinant identity at B = 0: |det M| = |det M_mech| |det M_mag|.
// Returns the relative mismatch.
double block_decoupling_mismatch(const LayerStack& stack, double lambda, double k);

}  // namespace magstab::cli
