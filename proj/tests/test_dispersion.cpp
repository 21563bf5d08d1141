#include <gtest/gtest.h>

#include "magstab/dispersion.hpp"
#include "magstab/errors.hpp"

using namespace magstab;

namespace {

constexpr double kBiotExact = 0.543689;

MaterialParams mag(double alpha, double beta, double mu = 1.0) { return {mu, 1.0, alpha, beta}; }

double sigma_ratio(const Matrix12c& M) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(normalized(M));
  const auto& s = svd.singularValues();
  return s(s.size() - 1) / s(0);
}

}  // namespace

// Reference values from an independent prototype (reduced exterior, same scan step).
struct OracleCase {
  const char* name;
  LayerStack stack;
  double k, b_bar, expected;
};

void PrintTo(const OracleCase& c, std::ostream* os) { *os << c.name; }

class FrozenOracle : public ::testing::TestWithParam<OracleCase> {};

TEST_P(FrozenOracle, CompressionCriticalStretch) {
  const auto& c = GetParam();
  const CriticalResult r = find_critical(c.stack, c.k, c.b_bar);
  ASSERT_TRUE(r.lambda_cr_compression.has_value());
  EXPECT_NEAR(*r.lambda_cr_compression, c.expected, 1e-6);
  EXPECT_FALSE(r.lambda_cr_tension.has_value());
}

INSTANTIATE_TEST_SUITE_P(
    Dispersion, FrozenOracle,
    ::testing::Values(OracleCase{"identical_a05_b1_B1", {mag(.5, 1), mag(.5, 1)}, 1, 1, 0.4447329971},
                      OracleCase{"identical_a05_b05_B05", {mag(.5, .5), mag(.5, .5)}, 1, .5, 0.5122758718},
                      OracleCase{"elastic_sub_upper_b2_B1", {non_magnetizable(), mag(.5, 2)}, 1, 1, 0.6681785697},
                      OracleCase{"both_b05_ratio5_B1", {mag(.5, .5), mag(.5, .5, 5)}, 1, 1, 0.8084802556},
                      OracleCase{"elastic_sub_ratio2_B2", {non_magnetizable(), mag(.5, .5, 2)}, 1, 2, 0.5331041510},
                      OracleCase{"ratio2_k03_B0", {non_magnetizable(), non_magnetizable(2)}, .3, 0, 0.6395380184}),
    [](const auto& info) { return std::string(info.param.name); });

TEST(Dispersion, BiotLimitForIdenticalLayers) {
  const LayerStack st{non_magnetizable(), non_magnetizable()};
  for (double k : {0.5, 3.0}) {
    const auto r = find_critical(st, k, 0.0);
    ASSERT_TRUE(r.lambda_cr_compression);
    EXPECT_NEAR(*r.lambda_cr_compression, 0.5437, 1e-4);
    EXPECT_NEAR(*r.lambda_cr_compression, kBiotExact, 2e-6);
    EXPECT_LT(r.null_residual_compression, 1e-6);
  }
  const BoundarySystem sys = assemble(st, {kBiotExact, 0.0, 1.0});
  EXPECT_LT(sigma_ratio(sys.M), 1e-5);
  SearchOptions o;
  EXPECT_NE(det_at(st, 1.0, 0.0, 0.54, o).sign, det_at(st, 1.0, 0.0, 0.55, o).sign);
}

TEST(Dispersion, ScaledDeterminantIgnoresColumnScale) {
  const BoundarySystem sys = assemble({mag(.5, 1), mag(.5, .5, 2)}, {0.7, 0.8, 1.0});
  Matrix12c M = sys.M;
  M.col(4) *= 10.0;
  const ScaledDet a = scaled_determinant(sys.M), b = scaled_determinant(M);
  EXPECT_NEAR(a.value, b.value, 1e-12 * std::abs(a.value));
  EXPECT_EQ(a.sign, b.sign);
  const ScaledDet id = scaled_determinant(Eigen::MatrixXcd::Identity(12, 12));
  EXPECT_DOUBLE_EQ(id.value, 1.0);
  EXPECT_EQ(id.sign, 1);
}

TEST(Dispersion, AssembleRejectsUnitStretch) {
  const LayerStack st{non_magnetizable(), non_magnetizable()};
  EXPECT_THROW(assemble(st, {1.0, 0.0, 1.0}), RootCoincidence);
  EXPECT_THROW(assemble(st, {1.0 + 5e-7, 0.0, 1.0}), RootCoincidence);
  EXPECT_NO_THROW(assemble(st, {1.0 - 1e-3, 0.0, 1.0}));
}

TEST(Dispersion, OptionsValidation) {
  SearchOptions o;
  EXPECT_NO_THROW(o.validate());
  o.lambda_min = 1.2;
  EXPECT_THROW(o.validate(), DomainError);
  o = {};
  o.scan_step = 1e-9;
  EXPECT_THROW(o.validate(), DomainError);
  o = {};
  o.coincidence_tol = 0;
  EXPECT_THROW(o.validate(), DomainError);
}

TEST(Dispersion, IdenticalLayersAreWavenumberInvariant) {
  const LayerStack st{mag(.5, .5), mag(.5, .5)};
  const double ref = *find_critical(st, 1.0, 1.0).lambda_cr_compression;
  for (double k : {0.1, 20.0}) EXPECT_NEAR(*find_critical(st, k, 1.0).lambda_cr_compression, ref, 1e-8);
}

TEST(Dispersion, NullVectorAtCriticalStretch) {
  const LayerStack st{non_magnetizable(), mag(.5, 2, 5)};
  const auto r = find_critical(st, 1.0, 0.5);
  ASSERT_TRUE(r.lambda_cr_compression);
  EXPECT_LT(r.null_residual_compression, 1e-6);
  const BoundarySystem sys = assemble(st, {*r.lambda_cr_compression, 0.5, 1.0});
  EXPECT_LT(std::abs(scaled_determinant(sys).value), 1e-6);
  EXPECT_LT(null_vector(sys).residual, 1e-6);
}

TEST(Dispersion, DipBetweenScanPointsIsRefined) {
  // Two crossings 2e-4 apart fall inside one scan interval.
  const auto r = find_critical({mag(.5, 1), mag(.5, 1, 10)}, 1.0, 1.1);
  ASSERT_TRUE(r.lambda_cr_compression);
  EXPECT_NEAR(*r.lambda_cr_compression, 0.861707378, 1e-7);
  bool dip = false;
  for (const auto& c : r.crossings) dip = dip || (c.from_dip && !c.artifact);
  EXPECT_TRUE(dip);
}

TEST(Dispersion, TraceRecordsScannedPoints) {
  SearchOptions o;
  o.record_trace = true;
  const auto r = find_critical({non_magnetizable(), non_magnetizable()}, 1.0, 0.0, o);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_GE(r.det_evals, static_cast<long>(r.trace.size()));
  for (const auto& t : r.trace) EXPECT_NE(t.lambda, 1.0);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  std::vector<SweepCase> cases;
  for (double b : {0.0, 0.5, 1.0, 1.5})
    for (double mu : {0.5, 2.0}) cases.push_back({{mag(.5, .5), mag(.5, .5, mu)}, 1.0, b});
  SearchOptions o;
  o.scan_step = 5e-3;
  const auto a = sweep(cases, o, 1), b = sweep(cases, o, 3);
  ASSERT_EQ(a.size(), cases.size());
  ASSERT_EQ(b.size(), cases.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].input.b_bar, cases[i].b_bar);
    EXPECT_EQ(a[i].status, b[i].status);
    EXPECT_EQ(a[i].result.lambda_cr_compression, b[i].result.lambda_cr_compression);
    EXPECT_EQ(a[i].result.lambda_cr_tension, b[i].result.lambda_cr_tension);
    EXPECT_EQ(a[i].result.det_evals, b[i].result.det_evals);
  }
  EXPECT_TRUE(sweep({}, o, 2).empty());
}

TEST(Sweep, StatusReflectsOutcome) {
  SearchOptions o;
  const auto ok = evaluate_case({{non_magnetizable(), non_magnetizable()}, 1.0, 0.0}, o);
  EXPECT_EQ(ok.status, PointStatus::Ok);
  EXPECT_STREQ(to_string(PointStatus::NoCrossing), "no-crossing");
  // A tiny window that excludes the critical stretch.
  o.lambda_min = 0.9;
  o.lambda_max = 1.1;
  const auto none = evaluate_case({{non_magnetizable(), non_magnetizable()}, 1.0, 0.0}, o);
  EXPECT_EQ(none.status, PointStatus::NoCrossing);
  EXPECT_FALSE(none.result.lambda_cr_compression);
}
