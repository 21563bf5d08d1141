#include "magstab/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "magstab/constitutive.hpp"
#include "magstab/errors.hpp"

namespace magstab {

const char* to_string(RootKind kind) {
  switch (kind) {
    case RootKind::Shear: return "shear";
    case RootKind::Pressure: return "pressure";
    case RootKind::Magnetic: return "magnetic";
    case RootKind::Generic: return "generic";
  }
  return "?";
}

const char* to_string(ExteriorReduction r) { return r == ExteriorReduction::Paper12 ? "paper-12" : "reduced"; }

Bicubic bicubic_coefficients(const ModuliSet& m, double /*p*/, double lambda) {
  const double l2 = lambda * lambda, l4 = l2 * l2;
  Bicubic c;
  c.c6 = (m.A2121 * m.K11 - m.G211 * m.G211) * l4;
  c.c4 = -(m.A2222 * m.K11 - 2 * (m.A2211 * m.K11 + m.A2112 * m.K11 + m.G211 * m.G222 - m.G121 * m.G211) * l2 +
           (m.A1111 * m.K11 + m.A2121 * m.K22 + 2 * m.G112 * m.G211) * l4);
  c.c2 = m.A1212 * m.K11 + m.A2222 * m.K22 - m.G121 * m.G121 + 2 * m.G121 * m.G222 - m.G222 * m.G222 -
         2 * (m.A2112 * m.K22 + m.A2211 * m.K22 + m.G112 * m.G121 - m.G112 * m.G222) * l2 +
         (m.A1111 * m.K22 - m.G112 * m.G112) * l4;
  c.c0 = -m.A1212 * m.K22;
  return c;
}

Bicubic factored_bicubic(const MaterialParams& p, double lambda, double b_bar) {
  const double l2 = lambda * lambda, l4 = l2 * l2;
  const double I4 = b_bar * b_bar / p.mu;
  const double a = (p.alpha + p.alpha * p.beta * I4 + p.beta * l2) * l2;
  const double c = p.alpha * l2 + p.beta;
  // (s - 1)(l4 s - 1)(a s - c)
  return {l4 * a, -(l4 * c + (1 + l4) * a), (1 + l4) * c + a, -c};
}

std::array<double, 3> closed_form_roots(const MaterialParams& p, double lambda, double b_bar) {
  const double l2 = lambda * lambda;
  const double num = (p.alpha * l2 + p.beta) * p.mu;
  const double den = p.alpha * p.mu + p.alpha * p.beta * b_bar * b_bar + p.beta * p.mu * l2;
  if (!(num / den > 0) || !std::isfinite(num / den))
    throw AdmissibilityViolated("magnetic mode root is not real at lambda = " + std::to_string(lambda));
  return {1.0, 1.0 / l2, std::sqrt(num / den) / lambda};
}

namespace {

using cld = std::complex<long double>;

cld eval_ld(const Bicubic& c, cld s) {
  return ((static_cast<long double>(c.c6) * s + static_cast<long double>(c.c4)) * s + static_cast<long double>(c.c2)) *
             s +
         static_cast<long double>(c.c0);
}
cld deriv_ld(const Bicubic& c, cld s) {
  return (3.0L * c.c6 * s + 2.0L * c.c4) * s + static_cast<long double>(c.c2);
}

cd newton_polish(const Bicubic& c, cd s0) {
  cld s = s0;
  for (int it = 0; it < 6; ++it) {
    const cld d = deriv_ld(c, s);
    if (std::abs(d) == 0) break;
    const cld next = s - eval_ld(c, s) / d;
    if (std::abs(eval_ld(c, next)) >= std::abs(eval_ld(c, s))) break;
    s = next;
  }
  return cd(static_cast<double>(s.real()), static_cast<double>(s.imag()));
}

}  // namespace

std::array<ModeRoot, 6> solve_roots(const Bicubic& c, double coincidence_tol) {
  if (c.c6 == 0 || !std::isfinite(c.c6)) throw DomainError("leading bicubic coefficient vanishes");
  Eigen::Matrix3d comp;
  comp << -c.c4 / c.c6, -c.c2 / c.c6, -c.c0 / c.c6, 1, 0, 0, 0, 1, 0;
  Eigen::EigenSolver<Eigen::Matrix3d> es(comp, false);
  std::array<cd, 3> s;
  for (int i = 0; i < 3; ++i) s[i] = newton_polish(c, es.eigenvalues()(i));

  // Clustered roots come back split by ~sqrt(eps), possibly as a complex pair.
  // Deflate the well-separated root and solve the remaining quadratic exactly.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double mag = std::max(1.0, std::abs(s[i]));
      if (std::abs(s[i] - s[j]) > 1e-5 * mag) continue;
      const int k = 3 - i - j;
      const cd sk = s[k];
      const cd A = c.c6, B = c.c4 + c.c6 * sk, C = c.c2 + (c.c4 + c.c6 * sk) * sk;
      const cd disc = B * B - 4.0 * A * C;
      cd sq = std::sqrt(disc);
      const cd q = -0.5 * (B + ((B * std::conj(sq)).real() >= 0 ? sq : -sq));
      const cd q1 = q / A, q2 = q == 0.0 ? q1 : C / q;
      // Splits within the rounding noise of the discriminant are a double root.
      const double eps = 2.2e-16;
      const double noise = std::sqrt(eps * (2 * std::abs(B) * (std::abs(c.c4) + std::abs(c.c6 * sk)) +
                                            4 * std::abs(A) * (std::abs(c.c2) + (std::abs(c.c4) + std::abs(c.c6 * sk)) * std::abs(sk)))) /
                           std::abs(A);
      if (std::abs(q1 - q2) <= 10 * noise) {
        s[i] = s[j] = -B / (2.0 * A);
      } else {
        s[i] = q1;
        s[j] = q2;
      }
    }

  std::array<ModeRoot, 6> out;
  for (int i = 0; i < 3; ++i) {
    cd si = s[i];
    if (std::abs(si.imag()) <= 1e-13 * std::abs(si)) si = cd(si.real(), 0.0);
    cd r = std::sqrt(si);
    if (r.imag() == 0 && r.real() < 0) r = -r;
    out[i].r = r;
    out[i + 3].r = -r;
  }
  std::sort(out.begin(), out.end(), [](const ModeRoot& a, const ModeRoot& b) {
    if (a.r.real() != b.r.real()) return a.r.real() > b.r.real();
    return a.r.imag() > b.r.imag();
  });
  for (auto& m : out) m.decaying = m.r.real() > 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (std::abs(out[i].r - out[j].r) < coincidence_tol) out[i].coincident = out[j].coincident = true;
  return out;
}

void classify_roots(std::array<ModeRoot, 6>& roots, const std::array<double, 3>& fam) {
  static constexpr RootKind kinds[3] = {RootKind::Shear, RootKind::Pressure, RootKind::Magnetic};
  // Match the three decaying roots to the families, minimizing the worst mismatch.
  std::array<int, 3> perm{0, 1, 2}, best = perm;
  double best_err = INFINITY;
  do {
    double err = 0;
    for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(roots[i].r - fam[perm[i]]));
    if (err < best_err) best_err = err, best = perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (int i = 0; i < 3; ++i) roots[i].kind = kinds[best[i]];
  // Growing roots mirror the decaying ones.
  std::array<bool, 3> used{};
  for (int j = 3; j < 6; ++j) {
    int pick = -1;
    double d = INFINITY;
    for (int i = 0; i < 3; ++i)
      if (!used[i] && std::abs(roots[i].r + roots[j].r) < d) d = std::abs(roots[i].r + roots[j].r), pick = i;
    used[pick] = true;
    roots[j].kind = roots[pick].kind;
  }
}

Matrix4c characteristic_matrix(const ModuliSet& m, double p, double lambda, cd r) {
  const double l2 = lambda * lambda;
  Matrix4c M;
  M << 1.0, r * l2, 0.0, 0.0,
      r * r * m.G211 + m.G112, r * (m.G222 - m.G121), m.K11 * r * r - m.K22, 0.0,
      r * r * m.A2121 - m.A1111 - p / l2, -r * (m.A1122 + m.A2112 + p), m.G112 + r * r * m.G211, 1.0 / l2,
      r * (m.A1221 + p + m.A2211), r * r * (m.A2222 + p * l2) - m.A1212, r * (m.G121 - m.G222), -r;
  return M;
}

namespace {

int pivot_index(Pivot p) { return p == Pivot::F ? 0 : 2; }
Pivot pivot_for(RootKind k) { return k == RootKind::Magnetic ? Pivot::V : Pivot::F; }

Vector4c normalize(Vector4c v, int pivot) {
  Eigen::Index big = 0;
  v.cwiseAbs().maxCoeff(&big);
  const double vmax = std::abs(v(big));
  if (vmax == 0) throw DegenerateMode("zero amplitude vector");
  if (std::abs(v(pivot)) > 1e-12 * vmax) return v / v(pivot);
  return v / v(big);
}

void check_unused_row(const Matrix4c& M, const Vector4c& v) {
  const double scale = M.row(2).norm() * v.norm();
  const cd res = (M.row(2) * v)(0);
  if (std::abs(res) > 1e-8 * std::max(scale, 1e-300))
    throw NumericalInconsistency("unused equilibrium component not satisfied (residual " +
                                 std::to_string(std::abs(res) / scale) + ")");
}

}  // namespace

ModeAmplitudes amplitude_eliminate(const ModuliSet& m, double p, double lambda, const ModeRoot& root, Pivot pivot) {
  const Matrix4c M = characteristic_matrix(m, p, lambda, root.r);
  if (M.cwiseAbs().maxCoeff() == 0) throw DegenerateMode("all amplitude relations vanish");
  const int piv = pivot_index(pivot);
  static constexpr int rows[3] = {0, 1, 3};  // incompressibility, curl, second equilibrium
  int cols[3], n = 0;
  for (int c = 0; c < 4; ++c)
    if (c != piv) cols[n++] = c;
  Eigen::Matrix<cd, 3, 3> S;
  Eigen::Matrix<cd, 3, 1> rhs;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) S(i, j) = M(rows[i], cols[j]);
    rhs(i) = -M(rows[i], piv);
  }
  Eigen::JacobiSVD<Eigen::Matrix<cd, 3, 3>> ssvd(S, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = ssvd.singularValues();
  Vector4c v;
  if (sv(0) > 0 && sv(2) > 1e-10 * sv(0)) {
    const Eigen::Matrix<cd, 3, 1> x = ssvd.solve(rhs);
    v(piv) = 1.0;
    for (int j = 0; j < 3; ++j) v(cols[j]) = x(j);
  } else {
    Eigen::JacobiSVD<Matrix4c> svd(M, Eigen::ComputeFullV);
    v = normalize(svd.matrixV().col(3), piv);
  }
  check_unused_row(M, v);
  return ModeAmplitudes::from(v);
}

namespace {

// Null space of dimension >= 2: pick the member whose partner's pivot vanishes.
Vector4c canonical_member(const Matrix4c& M, RootKind self, RootKind other, double lambda) {
  const int ps = pivot_index(pivot_for(self)), po = pivot_index(pivot_for(other));
  if (ps == po) throw RootCoincidence("coincident roots of the same pivot type", lambda);
  Eigen::JacobiSVD<Matrix4c> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(2) < 1e-7 * s(0))) throw RootCoincidence("defective root coincidence", lambda);
  const Eigen::Matrix<cd, 4, 2> N = svd.matrixV().rightCols(2);
  const Eigen::Matrix<cd, 2, 1> c(N(po, 1), -N(po, 0));
  Vector4c v = N * c;
  if (v.norm() < 1e-12) throw RootCoincidence("canonical basis degenerate", lambda);
  v(po) = 0;
  return normalize(v, ps);
}

int nullity(const Matrix4c& M, double tol) {
  Eigen::JacobiSVD<Matrix4c> svd(M);
  const auto& s = svd.singularValues();
  int n = 0;
  for (int i = 0; i < 4; ++i) n += s(i) < tol * s(0);
  return n;
}

}  // namespace

LayerModes layer_modes(const MaterialParams& params, double lambda, double b_bar, double coincidence_tol) {
  LayerModes L;
  L.lambda = lambda;
  LoadingPoint pt;
  pt.lambda = lambda;
  pt.b_bar = b_bar;
  L.moduli = analytic_moduli(params, pt);
  L.p = lagrange_multiplier(params, lambda, b_bar);
  // Closed-form families: exact, so genuine coincidences compare equal.
  const auto families = closed_form_roots(params, lambda, b_bar);
  static constexpr RootKind order[3] = {RootKind::Shear, RootKind::Pressure, RootKind::Magnetic};
  for (int sgn = 0; sgn < 2; ++sgn)
    for (int f = 0; f < 3; ++f) {
      ModeRoot& r = L.modes[3 * sgn + f].root;
      r.r = sgn == 0 ? families[f] : -families[f];
      r.kind = order[f];
      r.decaying = sgn == 0;
    }

  L.min_root_gap = INFINITY;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double d = std::abs(L.modes[i].root.r - L.modes[j].root.r);
      if (d < 1e-5) {
        const cd mid = 0.5 * (L.modes[i].root.r + L.modes[j].root.r);
        if (nullity(characteristic_matrix(L.moduli, L.p, lambda, mid), 1e-7) >= 2) continue;
      }
      L.min_root_gap = std::min(L.min_root_gap, d);
    }

  for (int sgn = 0; sgn < 2; ++sgn) {
    for (int f = 0; f < 3; ++f) {
      LayerMode& mode = L.modes[3 * sgn + f];
      int partner = -1, count = 0;
      for (int g = 0; g < 3; ++g)
        if (g != f && std::abs(L.modes[3 * sgn + g].root.r - mode.root.r) < coincidence_tol) partner = g, ++count;
      if (count > 1) throw RootCoincidence("triple root", lambda);
      if (partner < 0) {
        mode.amp = amplitude_eliminate(L.moduli, L.p, lambda, mode.root, pivot_for(mode.root.kind));
      } else {
        mode.root.coincident = true;
        const Matrix4c M = characteristic_matrix(L.moduli, L.p, lambda, mode.root.r);
        mode.amp = ModeAmplitudes::from(
            canonical_member(M, mode.root.kind, L.modes[3 * sgn + partner].root.kind, lambda));
      }
    }
  }

  for (auto& mode : L.modes) {
    if (mode.root.r.imag() != 0) L.all_real = false;
    Vector4c v = mode.amp.vec();
    if (v.imag().norm() <= 1e-10 * v.norm()) {
      v = v.real().cast<cd>();
      mode.amp = ModeAmplitudes::from(v);
    } else {
      L.all_real = false;
    }
  }
  return L;
}

Eigen::Matrix<cd, 6, 1> mode_traces(const LayerMode& mode, const ModuliSet& m, double p, double lambda) {
  const cd r = mode.root.r, F = mode.amp.F, G = mode.amp.G, V = mode.amp.V, P = mode.amp.P;
  const double l2 = lambda * lambda;
  Eigen::Matrix<cd, 6, 1> t;
  t(0) = m.A2121 * r * F - (m.A2112 + p) * G + m.G211 * r * V;
  t(1) = m.A2211 * F + (m.A2222 + p * l2) * r * G - P - m.G222 * V;
  t(2) = -V;
  t(3) = m.G211 * r * F - m.G121 * G + m.K11 * r * V;
  t(4) = F;
  t(5) = G;
  return t;
}

ExteriorMode exterior_mode(const LoadingPoint& point, ExteriorReduction reduction) {
  const double lam = point.lambda, b = point.b_bar, s = 1.0 / (lam * lam);
  if (!(lam > 0)) throw DomainError("stretch must be positive");
  ExteriorMode ex;
  ex.r_star = -s;
  ex.reduction = reduction;
  const Eigen::Matrix3d F = Eigen::Vector3d(lam, 1 / lam, 1).asDiagonal();
  const Eigen::Matrix3d Fi = F.inverse();
  const Eigen::Matrix3d C = F.transpose() * F;
  const Eigen::Vector3d BL(0, b, 0), Bs = F * BL;
  const Eigen::Matrix3d tau = Bs * Bs.transpose() - 0.5 * Bs.squaredNorm() * Eigen::Matrix3d::Identity();

  // Everything is linear in (F*, G*, V*): evaluate on the unit amplitudes.
  for (int n = 0; n < 3; ++n) {
    const double Fs = n == 0, Gs = n == 1, Vs = n == 2;
    Eigen::Matrix3d Fd = Eigen::Matrix3d::Zero();
    Fd(0, 0) = Fs;       // u1,1
    Fd(0, 1) = -s * Fs;  // u1,2
    Fd(1, 0) = -Gs;      // u2,1
    Fd(1, 1) = reduction == ExteriorReduction::Reduced ? -s * Fs : -s * Gs;  // u2,2
    const Eigen::Vector3d BdL(-s * Vs, -Vs, 0);  // (psi,2, -psi,1)
    const Eigen::Vector3d Bd = F * BdL + Fd * Fi * Bs;
    const Eigen::Matrix3d taud =
        Bd * Bs.transpose() + Bs * Bd.transpose() - Bs.dot(Bd) * Eigen::Matrix3d::Identity();
    const Eigen::Matrix3d Td = Fi * taud - Fi * Fd * Fi * tau;
    const Eigen::Matrix3d Cd = Fd.transpose() * F + F.transpose() * Fd;
    const Eigen::Vector3d HdL = Cd * BL + C * BdL;

    ex.u1(n) = Fs;
    ex.u2(n) = Gs;
    ex.Bd_L1(n) = BdL(0);
    ex.Bd_L2(n) = BdL(1);
    ex.Hd_L1(n) = HdL(0);
    ex.Hd_L2(n) = HdL(1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) ex.Td[i][j](n) = Td(i, j);
    // d/dX1 maps cos -> -sin, sin -> cos; d/dX2 multiplies by -s.
    ex.equilibrium_1(n) = -Td(0, 0) - s * Td(1, 0);
    ex.equilibrium_2(n) = Td(0, 1) - s * Td(1, 1);
  }
  return ex;
}

}  // namespace magstab
