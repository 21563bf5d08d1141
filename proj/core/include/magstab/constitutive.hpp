#pragma once

#include <Eigen/Dense>

#include "magstab/kinematics.hpp"

namespace magstab {

using Matrix3L = Eigen::Matrix<long double, 3, 3>;
using Vector3L = Eigen::Matrix<long double, 3, 1>;

// Energy per unit reference volume as a function of (F, B_L).
// Evaluated in extended precision so second differences stay clean.
class EnergyModel {
 public:
  virtual ~EnergyModel() = default;
  virtual long double value(const Matrix3L& F, const Vector3L& B) const = 0;
};

// Omega = mu/4 [(1+g)(I1-3) + (1-g)(I2-3)] + (alpha I4 + beta I5)/2.
// No unimodularity check here: the finite-difference oracle perturbs F freely.
class MooneyRivlinEnergy final : public EnergyModel {
 public:
  explicit MooneyRivlinEnergy(MaterialParams params) : params_(params) {}
  long double value(const Matrix3L& F, const Vector3L& B) const override;
  const MaterialParams& params() const { return params_; }

 private:
  MaterialParams params_;
};

// Checked evaluation; throws DomainError unless |det F - 1| <= 1e-12.
double energy_value(const MaterialParams& params, const Eigen::Matrix3d& F, const Eigen::Vector3d& B);

// dOmega/dF_{i alpha}, stored as (i, alpha).
Eigen::Matrix3d energy_gradient_F(const MaterialParams& params, const Eigen::Matrix3d& F, const Eigen::Vector3d& B);

// Lagrange multiplier fixed by zero incremental surface traction in the base state.
double lagrange_multiplier(const MaterialParams& params, double lambda, double b_bar);

struct LagrangeMultipliers {
  double p_s, p_u;
};
LagrangeMultipliers lagrange_multipliers(const LayerStack& stack, const LoadingPoint& point);

struct LayerBaseState {
  double T11, T22, T33;  // nominal stress (diagonal), with pressure
  double p;
  double H_L2;
};

struct BaseState {
  LayerBaseState substrate;
  LayerBaseState upper;
  // Maxwell stress outside the body, Eulerian and Lagrangian.
  double tau_star_11, tau_star_22, tau_star_33;
  double T_star_11, T_star_22, T_star_33;
};

LayerBaseState layer_base_state(const MaterialParams& params, double lambda, double b_bar);
BaseState base_state(const LayerStack& stack, const LoadingPoint& point);

}  // namespace magstab
