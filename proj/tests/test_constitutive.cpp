#include <random>

#include <gtest/gtest.h>

#include "magstab/constitutive.hpp"
#include "magstab/errors.hpp"

using namespace magstab;

namespace {
Eigen::Vector3d Bv(double b) { return {0, b, 0}; }
}  // namespace

TEST(Energy, Examples) {
  const MaterialParams mr = non_magnetizable();
  EXPECT_EQ(energy_value(mr, Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero()), 0.0);
  EXPECT_NEAR(energy_value(mr, deformation_gradient(2.0).F, Bv(0)), 1.125, 1e-15);
  EXPECT_NEAR(energy_value({1, 1, 0.5, 0.5}, deformation_gradient(1.0).F, Bv(1)), 0.5, 1e-15);
}

TEST(Energy, RejectsNonUnimodularF) {
  Eigen::Matrix3d F = Eigen::Matrix3d::Identity();
  F(0, 0) = 1.01;
  EXPECT_THROW(energy_value(non_magnetizable(), F, Bv(0)), DomainError);
}

TEST(Energy, EvenInInduction) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const MaterialParams m{1.3, 0.4, 0.5, 2.0};
  for (int n = 0; n < 50; ++n) {
    // Random unimodular F: shear composed with the plane-strain stretch.
    Eigen::Matrix3d S = Eigen::Matrix3d::Identity();
    S(0, 1) = u(rng);
    S(1, 2) = u(rng);
    const Eigen::Matrix3d F = deformation_gradient(1 + 0.5 * u(rng)).F * S;
    const Eigen::Vector3d B(u(rng), u(rng), u(rng));
    EXPECT_EQ(energy_value(m, F, B), energy_value(m, F, -B));
  }
}

TEST(Energy, GradientMatchesDifferences) {
  const MaterialParams m{1.0, 0.3, 0.5, 1.5};
  const Eigen::Matrix3d F = deformation_gradient(0.7).F;
  const Eigen::Vector3d B = Bv(0.8);
  const MooneyRivlinEnergy e(m);
  const Eigen::Matrix3d grad = energy_gradient_F(m, F, B);
  const long double h = 1e-6L;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) {
      Matrix3L Fp = F.cast<long double>(), Fm = Fp;
      Fp(i, a) += h;
      Fm(i, a) -= h;
      const Vector3L Bl = B.cast<long double>();
      const double fd = static_cast<double>((e.value(Fp, Bl) - e.value(Fm, Bl)) / (2 * h));
      EXPECT_NEAR(grad(i, a), fd, 1e-8) << i << a;
    }
}

TEST(LagrangeMultiplier, Examples) {
  EXPECT_DOUBLE_EQ(lagrange_multiplier(non_magnetizable(), 1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(lagrange_multiplier({1, 1, 0.5, 0.5}, 1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(lagrange_multiplier({1, 0, 0, 1}, 0.5, 0.0), 4.5);
  const auto pm = lagrange_multipliers({non_magnetizable(), {2.0, 0.5, 0.5, 2.0}}, {0.8, 1.2, 1.0});
  EXPECT_DOUBLE_EQ(pm.p_s, lagrange_multiplier(non_magnetizable(), 0.8, 1.2));
  EXPECT_DOUBLE_EQ(pm.p_u, lagrange_multiplier({2.0, 0.5, 0.5, 2.0}, 0.8, 1.2));
}

TEST(BaseState, ReferenceAndMaxwellExamples) {
  const LayerStack st{non_magnetizable(), non_magnetizable()};
  auto s = base_state(st, {1.0, 0.0, 1.0});
  EXPECT_NEAR(s.substrate.T22, 0.0, 1e-15);
  EXPECT_NEAR(s.upper.T22, 0.0, 1e-15);
  EXPECT_EQ(s.tau_star_22, 0.0);
  s = base_state(st, {1.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(s.tau_star_22, 0.5);
  EXPECT_DOUBLE_EQ(s.tau_star_11, -0.5);
}

TEST(BaseState, EquilibriumIdentitiesRandom) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ul(0.2, 3.0), ub(0.0, 5.0), ua(0.0, 1.0), ubeta(0.0, 5.0), ug(0.0, 1.0),
      umu(0.1, 10.0);
  for (int n = 0; n < 100; ++n) {
    const MaterialParams sub{1.0, ug(rng), ua(rng), ubeta(rng) + 0.01}, up{umu(rng), ug(rng), ua(rng), ubeta(rng) + 0.01};
    const LoadingPoint pt{ul(rng), ub(rng), 1.0};
    const BaseState s = base_state({sub, up}, pt);
    const double scale = 1 + pt.b_bar * pt.b_bar / pt.lambda;
    EXPECT_NEAR(s.upper.T22, s.T_star_22, 1e-12 * scale);
    EXPECT_NEAR(s.substrate.T22, s.upper.T22, 1e-12 * scale);
    EXPECT_NEAR(s.upper.H_L2, (up.alpha + up.beta / (pt.lambda * pt.lambda)) * pt.b_bar, 1e-12 * (1 + pt.b_bar));
    EXPECT_EQ(s.tau_star_11 + s.tau_star_22, 0.0);
    EXPECT_EQ(s.tau_star_33, s.tau_star_11);
  }
}
