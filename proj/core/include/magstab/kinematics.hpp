#pragma once

#include <Eigen/Dense>

namespace magstab {

// Per-layer parameters, dimensionless (substrate shear modulus = 1).
struct MaterialParams {
  double mu = 1.0;
  double gamma = 1.0;
  double alpha = 0.0;
  double beta = 1.0;

  void validate() const;
  bool operator==(const MaterialParams&) const = default;
};

// Non-magnetizable layer: (alpha, beta) = (0, 1) reproduces B = H.
inline MaterialParams non_magnetizable(double mu = 1.0, double gamma = 1.0) {
  return {mu, gamma, 0.0, 1.0};
}

// Upper layer thickness is the length unit and is not stored.
struct LayerStack {
  MaterialParams substrate;
  MaterialParams upper;
};

enum class WavenumberConvention { EulerianFixed, LagrangianFixed };

struct LoadingPoint {
  double lambda = 1.0;
  double b_bar = 0.0;
  double k = 1.0;
  WavenumberConvention convention = WavenumberConvention::EulerianFixed;

  // Lagrangian wavenumber K.
  double K() const { return convention == WavenumberConvention::EulerianFixed ? lambda * k : k; }
  double I4() const { return b_bar * b_bar; }
};

struct KinematicState {
  double lambda;
  Eigen::Matrix3d F;
  Eigen::Matrix3d C;
  double I1, I2, I3;
};

struct MagneticInvariants {
  double I4, I5, I6;
};

// Plane-strain base state F = diag(lambda, 1/lambda, 1).
KinematicState deformation_gradient(double lambda);

MagneticInvariants magnetic_invariants(const KinematicState& state, double b_bar);

}  // namespace magstab
