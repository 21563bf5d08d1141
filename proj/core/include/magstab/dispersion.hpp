#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magstab/kinematics.hpp"
#include "magstab/modes.hpp"

namespace magstab {

using Matrix12c = Eigen::Matrix<cd, 12, 12>;

// Rows 0-5 at the interface (upper minus substrate), rows 6-11 at the free
// surface (material minus exterior). Columns: 3 substrate modes, 6 upper-layer
// modes, then F*, G*, V*.
struct BoundarySystem {
  Matrix12c M;
  std::array<double, 12> column_exp_scale{};  // exponential pre-scaling per column
  std::array<std::string, 12> row_labels;
  std::array<std::string, 12> unknown_labels;
  LayerModes substrate, upper;
  ExteriorMode exterior;
  bool all_real = true;
};

BoundarySystem assemble(const LayerStack& stack, const LoadingPoint& point,
                        ExteriorReduction reduction = ExteriorReduction::Reduced);

// Columns scaled to unit norm.
Matrix12c normalized(const Matrix12c& M);

struct ScaledDet {
  double value = 0;
  int sign = 0;
};

// Determinant of the column-normalized matrix. With assert_real, a nonzero
// imaginary part beyond 1e-8 |det| raises NumericalInconsistency.
ScaledDet scaled_determinant(const Eigen::MatrixXcd& M, bool assert_real = false);
ScaledDet scaled_determinant(const BoundarySystem& sys);

struct SearchOptions {
  double lambda_min = 0.2;
  double lambda_max = 3.0;
  double scan_step = 2e-3;
  double bisection_tol = 1e-8;
  double coincidence_tol = 1e-8;
  ExteriorReduction exterior_reduction = ExteriorReduction::Reduced;
  WavenumberConvention convention = WavenumberConvention::EulerianFixed;
  bool record_trace = false;
  // A sign change is a root-crossing artifact when two same-layer roots are
  // closer than this at the bracket.
  double artifact_root_gap = 1e-5;
  // ... or a pole when the smallest normalized singular value stays above this.
  double artifact_sigma_ratio = 1e-6;

  void validate() const;
};

struct Crossing {
  double lo = 0, hi = 0, lambda = 0;
  double sigma_ratio = 0;  // sigma_min / sigma_max of the normalized matrix
  double root_gap = 0;
  bool artifact = false;
  bool from_dip = false;  // found by resampling a |det| dip between scan points
  std::string reason;
};

struct TracePoint {
  double lambda, det;
  int sign;
};

struct CriticalResult {
  std::optional<double> lambda_cr_compression;
  std::optional<double> lambda_cr_tension;
  std::vector<Crossing> crossings;
  std::vector<double> perturbations;         // lambdas nudged after RootCoincidence
  std::vector<double> even_multiplicity;     // |det| dips without sign change
  std::vector<TracePoint> trace;
  double null_residual_compression = 0;      // ||M x|| / ||M|| at the reported roots
  double null_residual_tension = 0;
  double exterior_residual_compression = 0;  // exterior equilibrium residual of the null vector
  double exterior_residual_tension = 0;
  long det_evals = 0;
};

// Scans away from lambda = 1 on both sides and bisects the first genuine
// sign change of the scaled determinant.
CriticalResult find_critical(const LayerStack& stack, double k, double b_bar, const SearchOptions& opts = {});

// Scaled determinant at one lambda, with the RootCoincidence nudge applied.
ScaledDet det_at(const LayerStack& stack, double k, double b_bar, double lambda, const SearchOptions& opts,
                 double* used_lambda = nullptr);

struct NullVector {
  Eigen::Matrix<cd, 12, 1> x;
  double residual = 0;           // ||M_n x|| / ||M_n||_2, M_n column-normalized
  double exterior_residual = 0;  // |equilibrium| of the exterior part, relative to |x*|
};

NullVector null_vector(const BoundarySystem& sys);

enum class PointStatus { Ok, NoCrossing, AdmissibilityViolated, NumericalInconsistency };
const char* to_string(PointStatus s);

struct SweepCase {
  LayerStack stack;
  double k = 1;
  double b_bar = 0;
};

struct SweepRow {
  SweepCase input;
  CriticalResult result;
  PointStatus status = PointStatus::NoCrossing;
  std::string error;
};

// Points are independent; results come back in input order whatever the
// thread count (0 = hardware concurrency).
std::vector<SweepRow> sweep(const std::vector<SweepCase>& cases, const SearchOptions& opts, unsigned threads = 1);

SweepRow evaluate_case(const SweepCase& c, const SearchOptions& opts);

}  // namespace magstab
