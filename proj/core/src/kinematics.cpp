#include "magstab/kinematics.hpp"

#include <cmath>
#include <string>

#include "magstab/errors.hpp"

namespace magstab {

void MaterialParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("shear modulus must be positive, got " + std::to_string(mu));
  if (!(gamma >= -1.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [-1, 1], got " + std::to_string(gamma));
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw DomainError("alpha and beta must be finite");
  if (alpha == 0.0 && beta == 0.0)
    throw DomainError("alpha = beta = 0 has no magnetic stiffness; non-magnetizable layers use (0, 1)");
}

KinematicState deformation_gradient(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("stretch must be positive, got " + std::to_string(lambda));
  KinematicState s;
  s.lambda = lambda;
  s.F = Eigen::Vector3d(lambda, 1.0 / lambda, 1.0).asDiagonal();
  s.C = s.F.transpose() * s.F;
  s.I1 = s.C.trace();
  s.I2 = 0.5 * (s.I1 * s.I1 - (s.C * s.C).trace());
  s.I3 = s.C.determinant();
  return s;
}

MagneticInvariants magnetic_invariants(const KinematicState& state, double b_bar) {
  const Eigen::Vector3d B(0.0, b_bar, 0.0);
  const Eigen::Vector3d CB = state.C * B;
  return {B.dot(B), B.dot(CB), CB.dot(CB)};
}

}  // namespace magstab
