#include "magstab/constitutive.hpp"

#include <cmath>

#include "magstab/errors.hpp"

namespace magstab {

long double MooneyRivlinEnergy::value(const Matrix3L& F, const Vector3L& B) const {
  const Matrix3L C = F.transpose() * F;
  const long double I1 = C.trace();
  const long double I2 = 0.5L * (I1 * I1 - (C * C).trace());
  const long double I4 = B.dot(B);
  const long double I5 = B.dot(C * B);
  const long double mu = params_.mu, g = params_.gamma;
  return 0.25L * mu * ((1 + g) * (I1 - 3) + (1 - g) * (I2 - 3)) +
         0.5L * (static_cast<long double>(params_.alpha) * I4 + static_cast<long double>(params_.beta) * I5);
}

double energy_value(const MaterialParams& params, const Eigen::Matrix3d& F, const Eigen::Vector3d& B) {
  if (std::abs(F.determinant() - 1.0) > 1e-12) throw DomainError("energy_value requires det F = 1");
  MooneyRivlinEnergy e(params);
  return static_cast<double>(e.value(F.cast<long double>(), B.cast<long double>()));
}

Eigen::Matrix3d energy_gradient_F(const MaterialParams& params, const Eigen::Matrix3d& F, const Eigen::Vector3d& B) {
  const Eigen::Matrix3d C = F.transpose() * F;
  const double I1 = C.trace();
  const double mu = params.mu, g = params.gamma;
  // dI1/dF = 2F, dI2/dF = 2(I1 F - F C), dI5/dF = 2 (FB) (x) B
  return 0.5 * mu * (1 + g) * F + 0.5 * mu * (1 - g) * (I1 * F - F * C) + params.beta * (F * B) * B.transpose();
}

double lagrange_multiplier(const MaterialParams& m, double lambda, double b_bar) {
  const double l2 = lambda * lambda;
  return 0.5 * m.mu * (1 - m.gamma + 2 / l2) + 0.5 * b_bar * b_bar * (2 * m.beta - 1) / l2;
}

LagrangeMultipliers lagrange_multipliers(const LayerStack& stack, const LoadingPoint& point) {
  return {lagrange_multiplier(stack.substrate, point.lambda, point.b_bar),
          lagrange_multiplier(stack.upper, point.lambda, point.b_bar)};
}

LayerBaseState layer_base_state(const MaterialParams& params, double lambda, double b_bar) {
  const KinematicState ks = deformation_gradient(lambda);
  const Eigen::Vector3d B(0, b_bar, 0);
  const double p = lagrange_multiplier(params, lambda, b_bar);
  // T_{alpha i} = dOmega/dF_{i alpha} - p F^{-1}_{alpha i}
  const Eigen::Matrix3d T = energy_gradient_F(params, ks.F, B).transpose() - p * ks.F.inverse();
  const Eigen::Vector3d H = params.alpha * B + params.beta * ks.C * B;
  return {T(0, 0), T(1, 1), T(2, 2), p, H(1)};
}

BaseState base_state(const LayerStack& stack, const LoadingPoint& point) {
  BaseState s;
  s.substrate = layer_base_state(stack.substrate, point.lambda, point.b_bar);
  s.upper = layer_base_state(stack.upper, point.lambda, point.b_bar);
  const double lam = point.lambda, b = point.b_bar;
  // B* = F B_L = (0, b/lambda, 0); tau* = B* (x) B* - |B*|^2 I / 2
  const double half = 0.5 * b * b / (lam * lam);
  s.tau_star_11 = -half;
  s.tau_star_22 = half;
  s.tau_star_33 = -half;
  s.T_star_11 = s.tau_star_11 / lam;
  s.T_star_22 = s.tau_star_22 * lam;
  s.T_star_33 = s.tau_star_33;
  return s;
}

}  // namespace magstab
