#pragma once

#include <array>

#include "magstab/constitutive.hpp"
#include "magstab/kinematics.hpp"

namespace magstab {

// Nonzero in-plane incremental moduli at the plane-strain base state.
// Index convention: A_{alpha i beta j} = d2 Omega / dF_{i alpha} dF_{j beta},
// G_{alpha i beta} = d2 Omega / dF_{i alpha} dB_beta, K_{alpha beta} = d2 Omega / dB_alpha dB_beta.
struct ModuliSet {
  double A1111 = 0, A2222 = 0, A1122 = 0, A2211 = 0, A1212 = 0, A2121 = 0, A2112 = 0, A1221 = 0;
  double G112 = 0, G222 = 0, G211 = 0, G121 = 0;
  double K11 = 0, K22 = 0;
};

// Every raw second derivative, zero-based indices.
struct FullModuli {
  double A[3][3][3][3] = {};  // [alpha][i][beta][j]
  double G[3][3][3] = {};     // [alpha][i][beta]
  double K[3][3] = {};        // [alpha][beta]
};

ModuliSet analytic_moduli(const MaterialParams& params, const LoadingPoint& point);

// General tensor expressions for the full arrays (any F, B), used as a second check.
FullModuli analytic_full_moduli(const MaterialParams& params, const Eigen::Matrix3d& F, const Eigen::Vector3d& B);

// Central second differences of the energy with one Richardson step.
// step is relative: h = step * max(1, |x|); must lie in [1e-6, 1e-3].
FullModuli fd_full_moduli(const EnergyModel& energy, const Eigen::Matrix3d& F, const Eigen::Vector3d& B,
                          double step = 1e-4);
FullModuli fd_full_moduli(const EnergyModel& energy, const LoadingPoint& point, double step = 1e-4);

ModuliSet reduce(const FullModuli& full);

ModuliSet fd_moduli(const EnergyModel& energy, const LoadingPoint& point, double step = 1e-4);

// Whether an in-plane component belongs to the nonzero pattern of ModuliSet.
bool in_nonzero_pattern_A(int alpha, int i, int beta, int j);
bool in_nonzero_pattern_G(int alpha, int i, int beta);
bool in_nonzero_pattern_K(int alpha, int beta);

// Named access to the 14 ModuliSet fields, in declaration order.
std::array<double, 14> as_array(const ModuliSet& m);
extern const std::array<const char*, 14> kModuliNames;

}  // namespace magstab
