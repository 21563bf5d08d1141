#include "magstab/moduli.hpp"

#include <cmath>
#include <functional>

#include "magstab/errors.hpp"

namespace magstab {

const std::array<const char*, 14> kModuliNames = {"A1111", "A2222", "A1122", "A2211", "A1212", "A2121", "A2112",
                                                  "A1221", "G112",  "G222",  "G211",  "G121",  "K11",   "K22"};

std::array<double, 14> as_array(const ModuliSet& m) {
  return {m.A1111, m.A2222, m.A1122, m.A2211, m.A1212, m.A2121, m.A2112,
          m.A1221, m.G112,  m.G222,  m.G211,  m.G121,  m.K11,   m.K22};
}

ModuliSet analytic_moduli(const MaterialParams& p, const LoadingPoint& point) {
  const double lam = point.lambda, l2 = lam * lam, b = point.b_bar, mu = p.mu, g = p.gamma;
  const double a = p.alpha, be = p.beta;
  if (!(lam > 0)) throw DomainError("stretch must be positive");
  ModuliSet m;
  m.A1111 = mu + 0.5 * mu * (1 - g) / l2;
  m.A2222 = 0.5 * mu * (2 + (1 - g) * l2) + be * b * b;
  m.A1122 = m.A2211 = mu * (1 - g);
  m.A1212 = mu;
  m.A2121 = mu + be * b * b;
  m.A2112 = m.A1221 = -0.5 * mu * (1 - g);
  m.G112 = 0.0;
  m.G222 = 2 * be * b / lam;
  m.G211 = be * b * lam;
  m.G121 = be * b / lam;
  m.K11 = a + be * l2;
  m.K22 = a + be / l2;
  return m;
}

FullModuli analytic_full_moduli(const MaterialParams& p, const Eigen::Matrix3d& F, const Eigen::Vector3d& B) {
  const Eigen::Matrix3d C = F.transpose() * F;
  const Eigen::Matrix3d bL = F * F.transpose();
  const double I1 = C.trace();
  const Eigen::Vector3d FB = F * B;
  const double c1 = 0.25 * p.mu * (1 + p.gamma), c2 = 0.25 * p.mu * (1 - p.gamma);
  auto d = [](int x, int y) { return x == y ? 1.0 : 0.0; };
  FullModuli out;
  for (int al = 0; al < 3; ++al)
    for (int i = 0; i < 3; ++i)
      for (int be = 0; be < 3; ++be)
        for (int j = 0; j < 3; ++j) {
          const double dI1 = 2 * d(i, j) * d(al, be);
          const double dI2 = 4 * F(i, al) * F(j, be) + 2 * I1 * d(i, j) * d(al, be) - 2 * d(i, j) * C(al, be) -
                             2 * F(i, be) * F(j, al) - 2 * bL(i, j) * d(al, be);
          out.A[al][i][be][j] = c1 * dI1 + c2 * dI2 + p.beta * d(i, j) * B(al) * B(be);
        }
  for (int al = 0; al < 3; ++al)
    for (int i = 0; i < 3; ++i)
      for (int be = 0; be < 3; ++be) out.G[al][i][be] = p.beta * (F(i, be) * B(al) + FB(i) * d(al, be));
  for (int al = 0; al < 3; ++al)
    for (int be = 0; be < 3; ++be) out.K[al][be] = p.alpha * d(al, be) + p.beta * C(al, be);
  return out;
}

namespace {

// Variables: x[3*i + alpha] = F_{i alpha}, x[9 + beta] = B_beta.
using Vars = std::array<long double, 12>;

long double eval(const EnergyModel& e, const Vars& x) {
  Matrix3L F;
  Vector3L B;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) F(i, a) = x[3 * i + a];
  for (int a = 0; a < 3; ++a) B(a) = x[9 + a];
  return e.value(F, B);
}

long double second_difference(const EnergyModel& e, Vars x, int u, int v, long double hu, long double hv) {
  if (u == v) {
    const long double x0 = x[u];
    const long double f0 = eval(e, x);
    x[u] = x0 + hu;
    const long double fp = eval(e, x);
    x[u] = x0 - hu;
    const long double fm = eval(e, x);
    return (fp - 2 * f0 + fm) / (hu * hu);
  }
  const long double xu = x[u], xv = x[v];
  long double acc = 0;
  for (int su : {1, -1})
    for (int sv : {1, -1}) {
      x[u] = xu + su * hu;
      x[v] = xv + sv * hv;
      acc += su * sv * eval(e, x);
    }
  return acc / (4 * hu * hv);
}

}  // namespace

FullModuli fd_full_moduli(const EnergyModel& energy, const Eigen::Matrix3d& F, const Eigen::Vector3d& B, double step) {
  if (!(step >= 1e-6 && step <= 1e-3)) throw DomainError("finite-difference step must lie in [1e-6, 1e-3]");
  Vars x{};
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) x[3 * i + a] = F(i, a);
  for (int a = 0; a < 3; ++a) x[9 + a] = B(a);
  std::array<long double, 12> h{};
  for (int n = 0; n < 12; ++n) h[n] = step * std::max(1.0L, std::abs(x[n]));

  // Richardson: (4 D(h/2) - D(h)) / 3 removes the h^2 error term.
  long double H[12][12];
  for (int u = 0; u < 12; ++u)
    for (int v = u; v < 12; ++v) {
      const long double coarse = second_difference(energy, x, u, v, h[u], h[v]);
      const long double fine = second_difference(energy, x, u, v, h[u] / 2, h[v] / 2);
      H[u][v] = H[v][u] = (4 * fine - coarse) / 3;
    }

  FullModuli out;
  for (int al = 0; al < 3; ++al)
    for (int i = 0; i < 3; ++i) {
      for (int be = 0; be < 3; ++be) {
        for (int j = 0; j < 3; ++j) out.A[al][i][be][j] = static_cast<double>(H[3 * i + al][3 * j + be]);
        out.G[al][i][be] = static_cast<double>(H[3 * i + al][9 + be]);
      }
    }
  for (int al = 0; al < 3; ++al)
    for (int be = 0; be < 3; ++be) out.K[al][be] = static_cast<double>(H[9 + al][9 + be]);
  return out;
}

FullModuli fd_full_moduli(const EnergyModel& energy, const LoadingPoint& point, double step) {
  const KinematicState ks = deformation_gradient(point.lambda);
  return fd_full_moduli(energy, ks.F, Eigen::Vector3d(0, point.b_bar, 0), step);
}

ModuliSet reduce(const FullModuli& f) {
  ModuliSet m;
  m.A1111 = f.A[0][0][0][0];
  m.A2222 = f.A[1][1][1][1];
  m.A1122 = f.A[0][0][1][1];
  m.A2211 = f.A[1][1][0][0];
  m.A1212 = f.A[0][1][0][1];
  m.A2121 = f.A[1][0][1][0];
  m.A2112 = f.A[1][0][0][1];
  m.A1221 = f.A[0][1][1][0];
  m.G112 = f.G[0][0][1];
  m.G222 = f.G[1][1][1];
  m.G211 = f.G[1][0][0];
  m.G121 = f.G[0][1][0];
  m.K11 = f.K[0][0];
  m.K22 = f.K[1][1];
  return m;
}

ModuliSet fd_moduli(const EnergyModel& energy, const LoadingPoint& point, double step) {
  return reduce(fd_full_moduli(energy, point, step));
}

bool in_nonzero_pattern_A(int al, int i, int be, int j) {
  // 1111 2222 1122 2211 1212 2121 2112 1221
  const int code = 1000 * (al + 1) + 100 * (i + 1) + 10 * (be + 1) + (j + 1);
  switch (code) {
    case 1111: case 2222: case 1122: case 2211: case 1212: case 2121: case 2112: case 1221:
      return true;
    default:
      return false;
  }
}

bool in_nonzero_pattern_G(int al, int i, int be) {
  const int code = 100 * (al + 1) + 10 * (i + 1) + (be + 1);
  return code == 112 || code == 222 || code == 211 || code == 121;
}

bool in_nonzero_pattern_K(int al, int be) { return al == be; }

}  // namespace magstab
