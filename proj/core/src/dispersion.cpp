#include "magstab/dispersion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <Eigen/SVD>

#include "magstab/errors.hpp"

namespace magstab {

namespace {

const std::array<std::string, 12> kRowLabels = {
    "interface:traction-21",   "interface:traction-22", "interface:normal-induction", "interface:tangential-field",
    "interface:u1",            "interface:u2",          "surface:traction-21",        "surface:traction-22",
    "surface:normal-induction", "surface:tangential-field", "surface:u1",             "surface:u2"};

const std::array<std::string, 12> kUnknownLabels = {"F_s1", "F_s2", "F_s3", "F_u1", "F_u2", "F_u3",
                                                    "F_u4", "F_u5", "F_u6", "F*",   "G*",   "V*"};

}  // namespace

void SearchOptions::validate() const {
  if (!(lambda_min > 0 && lambda_min < 1 - 1e-6 && lambda_max > 1 + 1e-6))
    throw DomainError("search bounds must satisfy 0 < lambda_min < 1 < lambda_max");
  if (!(scan_step > bisection_tol && bisection_tol > 0)) throw DomainError("need scan_step > bisection_tol > 0");
  if (!(coincidence_tol > 0)) throw DomainError("coincidence_tol must be positive");
}

BoundarySystem assemble(const LayerStack& stack, const LoadingPoint& point, ExteriorReduction reduction) {
  if (std::abs(point.lambda - 1.0) < 1e-6) throw RootCoincidence("lambda too close to 1", point.lambda);
  BoundarySystem sys;
  sys.row_labels = kRowLabels;
  sys.unknown_labels = kUnknownLabels;
  sys.substrate = layer_modes(stack.substrate, point.lambda, point.b_bar);
  sys.upper = layer_modes(stack.upper, point.lambda, point.b_bar);
  sys.exterior = exterior_mode(point, reduction);
  sys.all_real = sys.substrate.all_real && sys.upper.all_real;
  const double K = point.K(), lam = point.lambda;
  sys.M.setZero();

  // Substrate: decaying roots only, X2 = 0 is the interface.
  for (int j = 0; j < 3; ++j) {
    const LayerMode& m = sys.substrate.modes[j];
    sys.M.block<6, 1>(0, j) = -mode_traces(m, sys.substrate.moduli, sys.substrate.p, lam);
    sys.column_exp_scale[j] = 1.0;
  }
  // Upper layer spans 0 <= X2 <= 1; scale so that no exponential exceeds 1.
  for (int j = 0; j < 6; ++j) {
    const LayerMode& m = sys.upper.modes[j];
    const auto t = mode_traces(m, sys.upper.moduli, sys.upper.p, lam);
    const double re = m.root.r.real();
    const double sc = std::exp(-std::max(re, 0.0) * K);
    const cd top = std::exp(m.root.r * K) * sc;
    sys.M.block<6, 1>(0, 3 + j) = t * sc;
    sys.M.block<6, 1>(6, 3 + j) = t * top;
    sys.column_exp_scale[3 + j] = sc;
  }
  // Exterior amplitudes are defined at the surface.
  const ExteriorMode& ex = sys.exterior;
  for (int n = 0; n < 3; ++n) {
    const int c = 9 + n;
    sys.M(6, c) = -ex.Td[1][0](n);
    sys.M(7, c) = -ex.Td[1][1](n);
    sys.M(8, c) = -ex.Bd_L2(n);
    sys.M(9, c) = -ex.Hd_L1(n);
    sys.M(10, c) = -ex.u1(n);
    sys.M(11, c) = -ex.u2(n);
    sys.column_exp_scale[c] = 1.0;
  }
  return sys;
}

Matrix12c normalized(const Matrix12c& M) {
  Matrix12c N = M;
  for (int j = 0; j < 12; ++j) {
    const double n = N.col(j).norm();
    if (n > 0) N.col(j) /= n;
  }
  return N;
}

ScaledDet scaled_determinant(const Eigen::MatrixXcd& M, bool assert_real) {
  Eigen::MatrixXcd N = M;
  for (Eigen::Index j = 0; j < N.cols(); ++j) {
    const double n = N.col(j).norm();
    if (n == 0) return {0.0, 0};
    N.col(j) /= n;
  }
  const cd det = N.partialPivLu().determinant();
  if (assert_real && std::abs(det.imag()) > 1e-8 * (std::abs(det) + 1e-300))
    throw NumericalInconsistency("imaginary part of the determinant is not negligible");
  return {det.real(), det.real() > 0 ? 1 : (det.real() < 0 ? -1 : 0)};
}

ScaledDet scaled_determinant(const BoundarySystem& sys) { return scaled_determinant(sys.M, sys.all_real); }

NullVector null_vector(const BoundarySystem& sys) {
  Matrix12c N = sys.M;
  std::array<double, 12> norms{};
  for (int j = 0; j < 12; ++j) {
    norms[j] = N.col(j).norm();
    if (norms[j] > 0) N.col(j) /= norms[j];
  }
  Eigen::JacobiSVD<Matrix12c> svd(N, Eigen::ComputeFullV);
  NullVector out;
  const Eigen::Matrix<cd, 12, 1> x = svd.matrixV().col(11);
  const double smax = svd.singularValues()(0);
  out.residual = (N * x).cwiseAbs().maxCoeff() / smax;
  // Back to physical amplitudes (exponential scale folded in).
  for (int j = 0; j < 12; ++j) out.x(j) = norms[j] > 0 ? x(j) / norms[j] * sys.column_exp_scale[j] : 0.0;
  const Eigen::Matrix<cd, 3, 1> star = out.x.tail<3>();
  const double sn = star.norm();
  if (sn > 0) {
    const cd e1 = sys.exterior.equilibrium_1.cast<cd>().dot(star);
    const cd e2 = sys.exterior.equilibrium_2.cast<cd>().dot(star);
    out.exterior_residual = std::hypot(std::abs(e1), std::abs(e2)) / sn;
  }
  return out;
}

namespace {

struct Evaluator {
  const LayerStack& stack;
  double k, b;
  const SearchOptions& opts;
  CriticalResult* log;

  LoadingPoint point(double lam) const {
    LoadingPoint p;
    p.lambda = lam;
    p.b_bar = b;
    p.k = k;
    p.convention = opts.convention;
    return p;
  }

  BoundarySystem system(double lam, double* used = nullptr) const {
    // Coincident roots: nudge lambda upwards, escalating if the first nudge is not enough.
    double nudge = 0;
    for (int attempt = 0;; ++attempt) {
      try {
        if (used) *used = lam + nudge;
        return assemble(stack, point(lam + nudge), opts.exterior_reduction);
      } catch (const RootCoincidence&) {
        if (attempt == 3) throw;
        if (log) log->perturbations.push_back(lam);
        nudge = 1e-7 * std::pow(10.0, attempt);
      }
    }
  }

  double det(double lam) const {
    if (log) ++log->det_evals;
    const ScaledDet d = scaled_determinant(system(lam));
    if (log && opts.record_trace) log->trace.push_back({lam, d.value, d.sign});
    return d.value;
  }
};

int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

// Quadratic through three samples; returns the vertex (lambda, value).
bool parabola_vertex(const double x[3], const double y[3], double& xv, double& yv) {
  const double d1 = (y[1] - y[0]) / (x[1] - x[0]);
  const double d2 = (y[2] - y[1]) / (x[2] - x[1]);
  const double a = (d2 - d1) / (x[2] - x[0]);
  if (a == 0) return false;
  const double bcoef = d1 - a * (x[0] + x[1]);
  xv = -bcoef / (2 * a);
  yv = y[0] + d1 * (xv - x[0]) + a * (xv - x[0]) * (xv - x[1]);
  return true;
}

}  // namespace

ScaledDet det_at(const LayerStack& stack, double k, double b_bar, double lambda, const SearchOptions& opts,
                 double* used_lambda) {
  Evaluator ev{stack, k, b_bar, opts, nullptr};
  return scaled_determinant(ev.system(lambda, used_lambda));
}

CriticalResult find_critical(const LayerStack& stack, double k, double b_bar, const SearchOptions& opts) {
  opts.validate();
  stack.substrate.validate();
  stack.upper.validate();
  if (!(k > 0)) throw DomainError("wavenumber must be positive");
  if (!(b_bar >= 0)) throw DomainError("induction must be non-negative");

  CriticalResult res;
  Evaluator ev{stack, k, b_bar, opts, &res};

  for (int side = 0; side < 2; ++side) {
    const double dir = side == 0 ? -1.0 : 1.0;
    const double start = 1.0 + dir * 1e-3;
    const double end = side == 0 ? opts.lambda_min : opts.lambda_max;
    double hx[3], hy[3];
    int nh = 0;
    double px = 0, pd = 0;
    bool have_prev = false;

    // Bisects [a, b] (det values da, db of opposite sign, a nearer to 1) and
    // classifies the crossing. Returns true when it is reported as lambda_cr.
    auto bracket = [&](double a, double da, double b, double db, bool from_dip) {
      double lo = a, hi = b;
      if (db != 0) {
        while (std::abs(hi - lo) > opts.bisection_tol) {
          const double mid = 0.5 * (lo + hi);
          const double dm = ev.det(mid);
          if (sgn(dm) == sgn(da)) lo = mid;
          else hi = mid;
        }
      } else {
        lo = hi = b;
      }
      Crossing c;
      c.lo = std::min(lo, hi);
      c.hi = std::max(lo, hi);
      c.lambda = 0.5 * (lo + hi);
      c.from_dip = from_dip;
      const BoundarySystem sys = ev.system(c.lambda);
      Eigen::JacobiSVD<Matrix12c> svd(normalized(sys.M));
      const auto& s = svd.singularValues();
      c.sigma_ratio = s(11) / s(0);
      c.root_gap = std::min(sys.substrate.min_root_gap, sys.upper.min_root_gap);
      if (c.root_gap < opts.artifact_root_gap) {
        c.artifact = true;
        c.reason = "root-crossing";
      } else if (c.sigma_ratio > opts.artifact_sigma_ratio) {
        c.artifact = true;
        c.reason = "pole";
      }
      res.crossings.push_back(c);
      if (c.artifact) return false;
      const NullVector nv = null_vector(sys);
      if (side == 0) {
        res.lambda_cr_compression = c.lambda;
        res.null_residual_compression = nv.residual;
        res.exterior_residual_compression = nv.exterior_residual;
      } else {
        res.lambda_cr_tension = c.lambda;
        res.null_residual_tension = nv.residual;
        res.exterior_residual_tension = nv.exterior_residual;
      }
      return true;
    };

    // A dip may hide two sign changes closer than the scan step; resample it.
    auto refine_dip = [&]() {
      constexpr int n = 64;
      double qx = hx[0], qd = hy[0];
      for (int j = 1; j <= n; ++j) {
        const double x = j == n ? hx[2] : hx[0] + (hx[2] - hx[0]) * j / n;
        const double d = j == n ? hy[2] : ev.det(x);
        if (sgn(d) != sgn(qd) && bracket(qx, qd, x, d, true)) return true;
        if (d != 0) {
          qx = x;
          qd = d;
        }
      }
      return false;
    };

    for (long i = 0;; ++i) {
      const double x = start + dir * static_cast<double>(i) * opts.scan_step;
      if (dir < 0 ? x < end : x > end) break;
      const double d = ev.det(x);

      // |det| dip without a sign change: close pair of crossings or an
      // even-multiplicity root.
      if (nh == 3) {
        std::copy(hx + 1, hx + 3, hx);
        std::copy(hy + 1, hy + 3, hy);
        nh = 2;
      }
      hx[nh] = x;
      hy[nh] = d;
      ++nh;
      if (nh == 3 && sgn(hy[0]) == sgn(hy[1]) && sgn(hy[1]) == sgn(hy[2]) && std::abs(hy[1]) < std::abs(hy[0]) &&
          std::abs(hy[1]) < std::abs(hy[2])) {
        double xv, yv;
        if (parabola_vertex(hx, hy, xv, yv) &&
            (sgn(yv) != sgn(hy[1]) || std::abs(yv) < 1e-3 * std::max(std::abs(hy[0]), std::abs(hy[2])))) {
          if (refine_dip()) break;
          res.even_multiplicity.push_back(xv);
        }
      }

      if (have_prev && sgn(d) != sgn(pd) && bracket(px, pd, x, d, false)) break;
      if (d != 0) {
        px = x;
        pd = d;
        have_prev = true;
      }
    }
  }
  return res;
}

const char* to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Ok: return "ok";
    case PointStatus::NoCrossing: return "no-crossing";
    case PointStatus::AdmissibilityViolated: return "admissibility-violated";
    case PointStatus::NumericalInconsistency: return "numerical-inconsistency";
  }
  return "?";
}

SweepRow evaluate_case(const SweepCase& c, const SearchOptions& opts) {
  SweepRow row;
  row.input = c;
  try {
    row.result = find_critical(c.stack, c.k, c.b_bar, opts);
    row.status = (row.result.lambda_cr_compression || row.result.lambda_cr_tension) ? PointStatus::Ok
                                                                                     : PointStatus::NoCrossing;
  } catch (const AdmissibilityViolated& e) {
    row.status = PointStatus::AdmissibilityViolated;
    row.error = e.what();
  } catch (const Error& e) {
    row.status = PointStatus::NumericalInconsistency;
    row.error = e.what();
  }
  return row;
}

std::vector<SweepRow> sweep(const std::vector<SweepCase>& cases, const SearchOptions& opts, unsigned threads) {
  std::vector<SweepRow> rows(cases.size());
  if (cases.empty()) return rows;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cases.size()));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < cases.size(); i = next++) rows[i] = evaluate_case(cases[i], opts);
  };
  if (threads == 1) {
    worker();
    return rows;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

}  // namespace magstab
