#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "magstab/kinematics.hpp"
#include "magstab/moduli.hpp"

namespace magstab {

using cd = std::complex<double>;
using Vector4c = Eigen::Matrix<cd, 4, 1>;
using Matrix4c = Eigen::Matrix<cd, 4, 4>;

// c6 s^3 + c4 s^2 + c2 s + c0 with s = r^2.
struct Bicubic {
  double c6 = 0, c4 = 0, c2 = 0, c0 = 0;
  double eval(double s) const { return ((c6 * s + c4) * s + c2) * s + c0; }
  cd eval(cd s) const { return ((c6 * s + c4) * s + c2) * s + c0; }
};

// General characteristic polynomial in terms of the moduli. p does not enter;
// it is accepted so callers pass a consistent base state.
Bicubic bicubic_coefficients(const ModuliSet& m, double p, double lambda);

// (s - 1)(s lambda^4 - 1)(a s - c) expanded, with the layer's own
// I4 = b^2 / mu (the magnetic term is not scaled by mu).
Bicubic factored_bicubic(const MaterialParams& params, double lambda, double b_bar);

// Closed-form positive roots {1, lambda^-2, r3}. Throws AdmissibilityViolated
// when r3^2 is not positive.
std::array<double, 3> closed_form_roots(const MaterialParams& params, double lambda, double b_bar);

enum class RootKind { Shear, Pressure, Magnetic, Generic };
const char* to_string(RootKind kind);

struct ModeRoot {
  cd r;
  RootKind kind = RootKind::Generic;
  bool decaying = false;  // Re r > 0: decays towards X2 -> -infinity
  bool coincident = false;
};

// Six roots +-sqrt(s), sorted by descending Re r. Near-double roots of the
// cubic are snapped onto the common root; coincidences are flagged, not thrown,
// because semisimple ones are legitimate (see layer_modes).
std::array<ModeRoot, 6> solve_roots(const Bicubic& coeffs, double coincidence_tol = 1e-8);

// Assign shear / pressure / magnetic labels by matching to closed-form families.
void classify_roots(std::array<ModeRoot, 6>& roots, const std::array<double, 3>& families);

// 4x4 system on (F, G, V, P): incompressibility, curl condition, the two
// equilibrium components.
Matrix4c characteristic_matrix(const ModuliSet& m, double p, double lambda, cd r);

struct ModeAmplitudes {
  cd F, G, V, P;
  Vector4c vec() const { return {F, G, V, P}; }
  static ModeAmplitudes from(const Vector4c& v) { return {v(0), v(1), v(2), v(3)}; }
};

enum class Pivot { F, V };

// Solves incompressibility, curl and the second equilibrium component with the
// pivot amplitude fixed to 1. Falls back to the SVD null vector (scaled so the
// pivot or, failing that, the largest entry is 1). The unused equilibrium
// component is checked afterwards.
ModeAmplitudes amplitude_eliminate(const ModuliSet& m, double p, double lambda, const ModeRoot& root,
                                   Pivot pivot = Pivot::F);

struct LayerMode {
  ModeRoot root;
  ModeAmplitudes amp;
};

// Six modes ordered by family: +shear, +pressure, +magnetic, then the negatives.
struct LayerModes {
  std::array<LayerMode, 6> modes;
  ModuliSet moduli;
  double p = 0;
  double lambda = 1;
  bool all_real = true;
  double min_root_gap = 0;  // smallest gap between distinct positive roots
};

// Coincident roots with a two-dimensional null space get a canonical basis
// (mechanical member with V = 0, magnetic member with F = 0). A defective
// coincidence raises RootCoincidence.
LayerModes layer_modes(const MaterialParams& params, double lambda, double b_bar, double coincidence_tol = 1e-8);

// Interface/surface traces of one mode with unit amplitude at X2 = 0:
// [traction 21, traction 22, normal induction, tangential field, u1, u2].
Eigen::Matrix<cd, 6, 1> mode_traces(const LayerMode& mode, const ModuliSet& m, double p, double lambda);

enum class ExteriorReduction { Paper12, Reduced };
const char* to_string(ExteriorReduction r);

using LinearForm = Eigen::Vector3d;  // coefficients on (F*, G*, V*)

// Exterior perturbation with exponent -lambda^-2, amplitudes taken at the
// surface, a common factor K and the trigonometric factor dropped.
// sin(K X1): u1, Td[1][0], Td[0][1], Hd_L1, Bd_L1, equilibrium_1
// cos(K X1): u2, Td[0][0], Td[1][1], Td[2][2], Hd_L2, Bd_L2, equilibrium_2
// Reduced: the extension is divergence free, so u2,2 = -lambda^-2 u1,1 is carried by F*.
struct ExteriorMode {
  double r_star = -1;
  ExteriorReduction reduction = ExteriorReduction::Paper12;
  LinearForm u1, u2;
  LinearForm Bd_L1, Bd_L2;
  LinearForm Hd_L1, Hd_L2;
  std::array<std::array<LinearForm, 3>, 3> Td;
  // Div of the Maxwell stress increment, per K^2.
  LinearForm equilibrium_1, equilibrium_2;
};

ExteriorMode exterior_mode(const LoadingPoint& point, ExteriorReduction reduction = ExteriorReduction::Paper12);

}  // namespace magstab
