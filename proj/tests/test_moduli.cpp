#include <gtest/gtest.h>

#include "magstab/errors.hpp"
#include "magstab/moduli.hpp"

using namespace magstab;

namespace {

struct ConstantEnergy final : EnergyModel {
  long double value(const Matrix3L&, const Vector3L&) const override { return 3.25L; }
};

struct QuadraticEnergy final : EnergyModel {
  long double value(const Matrix3L& F, const Vector3L&) const override { return 0.5L * F.squaredNorm(); }
};

// Symbolic second derivatives (sympy), field order of ModuliSet.
constexpr std::array<double, 14> kSympyA = {1, 1.98, 0, 0, 1, 1.98, 0, 0, 0, 2.15384615384615, 1.82,
                                            1.07692307692308, 3.88, 1.68343195266272};
constexpr std::array<double, 14> kSympyB = {3.94444444444444, 6.252, 1.4, 1.4, 2, 6, -0.7, -0.7, 0,
                                            6.66666666666667, 1.2, 3.33333333333333, 0.86, 3.27777777777778};

}  // namespace

TEST(Moduli, FrozenSymbolicValues) {
  const auto a = as_array(analytic_moduli({1, 1, 0.5, 2}, {1.3, 0.7, 1}));
  const auto b = as_array(analytic_moduli({2, 0.3, 0.5, 1}, {0.6, 2.0, 1}));
  for (int n = 0; n < 14; ++n) {
    EXPECT_NEAR(a[n], kSympyA[n], 1e-13) << kModuliNames[n];
    EXPECT_NEAR(b[n], kSympyB[n], 1e-13) << kModuliNames[n];
  }
}

TEST(Moduli, FdAgreesAtSpecExample) {
  const MaterialParams m{1, 1, 0.5, 2};
  const LoadingPoint pt{1.3, 0.7, 1};
  const auto an = as_array(analytic_moduli(m, pt));
  const auto fd = as_array(fd_moduli(MooneyRivlinEnergy(m), pt));
  for (int n = 0; n < 14; ++n) EXPECT_LE(std::abs(an[n] - fd[n]) / std::max(1.0, std::abs(an[n])), 1e-6) << kModuliNames[n];
}

TEST(Moduli, MagneticStiffnessExample) {
  const auto m = analytic_moduli({1, 1, 0.5, 0.5}, {1.0, 0.0, 1});
  EXPECT_DOUBLE_EQ(m.K11, 1.0);
  EXPECT_DOUBLE_EQ(m.K22, 1.0);
  const auto fd = fd_moduli(MooneyRivlinEnergy(non_magnetizable()), {1.0, 0.0, 1});
  EXPECT_NEAR(fd.A1212, 1.0, 1e-8);
  EXPECT_NEAR(fd.A2121, 1.0, 1e-8);
}

TEST(Moduli, CouplingVanishesWithoutField) {
  for (double l : {0.4, 1.2, 2.5}) {
    const auto m = analytic_moduli({1, 0.5, 0.5, 2}, {l, 0.0, 1});
    EXPECT_EQ(m.G112, 0.0);
    EXPECT_EQ(m.G222, 0.0);
    EXPECT_EQ(m.G211, 0.0);
    EXPECT_EQ(m.G121, 0.0);
  }
}

TEST(Moduli, ParityInInduction) {
  const MaterialParams m{1.5, 0.2, 0.5, 1.0};
  const MooneyRivlinEnergy e(m);
  const auto F = deformation_gradient(0.8).F;
  const auto plus = fd_full_moduli(e, F, Eigen::Vector3d(0, 1.1, 0));
  const auto minus = fd_full_moduli(e, F, Eigen::Vector3d(0, -1.1, 0));
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) {
      for (int b = 0; b < 3; ++b) {
        EXPECT_NEAR(plus.G[a][i][b], -minus.G[a][i][b], 1e-8);
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(plus.A[a][i][b][j], minus.A[a][i][b][j], 1e-8);
      }
      EXPECT_NEAR(plus.K[a][i], minus.K[a][i], 1e-8);
    }
}

TEST(Moduli, MajorSymmetryOfFdTensor) {
  const auto fd = fd_full_moduli(MooneyRivlinEnergy({1, 0.3, 0.5, 2}), {0.6, 1.5, 1});
  double worst = 0;
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i)
      for (int b = 0; b < 3; ++b)
        for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(fd.A[a][i][b][j] - fd.A[b][j][a][i]));
  EXPECT_LT(worst, 1e-10);
}

TEST(Moduli, FullAnalyticTensorMatchesFd) {
  const MaterialParams m{2, 0.3, 0.5, 1};
  const auto F = deformation_gradient(1.7).F;
  const Eigen::Vector3d B(0, 0.9, 0);
  const auto an = analytic_full_moduli(m, F, B);
  const auto fd = fd_full_moduli(MooneyRivlinEnergy(m), F, B);
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) {
      for (int b = 0; b < 3; ++b) {
        EXPECT_NEAR(an.G[a][i][b], fd.G[a][i][b], 1e-6);
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(an.A[a][i][b][j], fd.A[a][i][b][j], 1e-6);
      }
      EXPECT_NEAR(an.K[a][i], fd.K[a][i], 1e-6);
    }
}

TEST(Moduli, TrivialEnergies) {
  const auto F = deformation_gradient(1.4).F;
  const Eigen::Vector3d B(0, 0.5, 0);
  const auto c = fd_full_moduli(ConstantEnergy{}, F, B);
  const auto q = fd_full_moduli(QuadraticEnergy{}, F, B);
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) {
      for (int b = 0; b < 3; ++b) {
        EXPECT_EQ(c.G[a][i][b], 0.0);
        EXPECT_NEAR(q.G[a][i][b], 0.0, 1e-12);
        for (int j = 0; j < 3; ++j) {
          EXPECT_EQ(c.A[a][i][b][j], 0.0);
          EXPECT_NEAR(q.A[a][i][b][j], (i == j && a == b) ? 1.0 : 0.0, 1e-9);
        }
      }
      EXPECT_EQ(c.K[a][i], 0.0);
      EXPECT_NEAR(q.K[a][i], 0.0, 1e-12);
    }
}

TEST(Moduli, StepRangeEnforced) {
  const MooneyRivlinEnergy e(non_magnetizable());
  EXPECT_THROW(fd_moduli(e, {1.2, 0, 1}, 1e-7), DomainError);
  EXPECT_THROW(fd_moduli(e, {1.2, 0, 1}, 1e-2), DomainError);
  EXPECT_NO_THROW(fd_moduli(e, {1.2, 0, 1}, 1e-3));
}

TEST(Moduli, NonzeroPattern) {
  EXPECT_TRUE(in_nonzero_pattern_A(0, 0, 0, 0));
  EXPECT_TRUE(in_nonzero_pattern_A(1, 0, 0, 1));  // A2112
  EXPECT_FALSE(in_nonzero_pattern_A(0, 0, 0, 1));
  EXPECT_TRUE(in_nonzero_pattern_G(1, 1, 1));
  EXPECT_FALSE(in_nonzero_pattern_G(0, 0, 0));
  EXPECT_TRUE(in_nonzero_pattern_K(0, 0));
  EXPECT_FALSE(in_nonzero_pattern_K(0, 1));
}
