#include "bessel/polyroots.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "bessel/error.hpp"

namespace bessel {

namespace {

constexpr int kMaxDegree = 200;

void check_degree(int n) {
  if (n < 1 || n > kMaxDegree) {
    throw Error(ErrorCode::SizeOutOfRange,
                "polynomial degree " + std::to_string(n) + " outside [1, 200]");
  }
}

// Eigenvalues of the symmetric tridiagonal Jacobi matrix, descending.
Vec jacobi_eigenvalues(const Vec& diag, const Vec& offdiag) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
  Eigen::VectorXd e(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i + 1 < n; ++i) e[i] = offdiag[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  Vec out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// Newton correction p(x)/p'(x) from a three-term recurrence. The recurrence is
// rescaled on the fly; the ratio is unaffected.
double hermite_newton_step(int n, double x) {
  double prev = 1.0;       // H_0
  double cur = 2.0 * x;    // H_1
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      prev *= 1e-150;
      cur *= 1e-150;
    }
  }
  // H_n' = 2n H_{n-1}
  return cur / (2.0 * n * prev);
}

double laguerre_newton_step(int n, double alpha, double x) {
  double prev = 1.0;              // L_0
  double cur = 1.0 + alpha - x;   // L_1
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      prev *= 1e-150;
      cur *= 1e-150;
    }
  }
  // x L_n' = n L_n - (n + alpha) L_{n-1}
  const double deriv_times_x = n * cur - (n + alpha) * prev;
  return x * cur / deriv_times_x;
}

template <typename StepFn>
void polish(Vec& roots, StepFn step) {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    // Never move a root further than a fraction of the distance to its
    // neighbours; keeps the polish from hopping to an adjacent zero.
    double spacing = std::numeric_limits<double>::infinity();
    if (i > 0) spacing = std::min(spacing, roots[i - 1] - roots[i]);
    if (i + 1 < roots.size()) spacing = std::min(spacing, roots[i] - roots[i + 1]);
    for (int it = 0; it < 3; ++it) {
      const double delta = step(roots[i]);
      if (!std::isfinite(delta) || std::abs(delta) > 0.1 * spacing) break;
      roots[i] -= delta;
      if (std::abs(delta) <= 1e-16 * std::max(1.0, std::abs(roots[i]))) break;
    }
  }
}

bool pins_last(const RootSystemSpec& spec, std::optional<double> nu) {
  return spec.kind == RootKind::D || (spec.kind == RootKind::B && nu.value_or(0.0) == 0.0);
}

void check_regime(const RootSystemSpec& spec, std::optional<double> nu) {
  spec.validate();
  if (spec.kind == RootKind::B) {
    if (!nu) throw Error(ErrorCode::MissingNu, "type B stationary system needs nu");
    if (*nu < 0.0) throw Error(ErrorCode::ConfigInvalid, "nu must be >= 0");
  }
}

// Number of free coordinates and whether the chamber point with y_N = 0
// appended is the full configuration.
int free_dim(const RootSystemSpec& spec, std::optional<double> nu) {
  return pins_last(spec, nu) ? spec.n - 1 : spec.n;
}

bool free_part_interior(const RootSystemSpec& spec, std::optional<double> nu,
                        std::span<const double> y) {
  const int m = free_dim(spec, nu);
  for (int i = 0; i + 1 < m; ++i) {
    if (!(y[i] > y[i + 1])) return false;
  }
  if (spec.kind != RootKind::A && m > 0 && !(y[m - 1] > 0.0)) return false;
  return true;
}

// Jacobian of the stationary defect with respect to the free coordinates.
Eigen::MatrixXd defect_jacobian(const RootSystemSpec& spec, std::optional<double> nu,
                                std::span<const double> y) {
  const int m = free_dim(spec, nu);
  const int n = spec.n;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    double diag = -0.5;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dm = 1.0 / ((y[i] - y[j]) * (y[i] - y[j]));
      if (spec.kind == RootKind::A) {
        diag -= dm;
        if (j < m) jac(i, j) = dm;
      } else {
        const double dp = 1.0 / ((y[i] + y[j]) * (y[i] + y[j]));
        diag -= dm + dp;
        if (j < m) jac(i, j) = dm - dp;
      }
    }
    if (spec.kind == RootKind::B && !pins_last(spec, nu)) diag -= *nu / (y[i] * y[i]);
    jac(i, i) = diag;
  }
  return jac;
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Vec hermite_zeros(int n) {
  check_degree(n);
  // Monic recurrence p_{k+1} = x p_k - (k/2) p_{k-1}.
  Vec diag(static_cast<std::size_t>(n), 0.0);
  Vec off(static_cast<std::size_t>(n > 1 ? n - 1 : 0));
  for (int k = 1; k < n; ++k) off[static_cast<std::size_t>(k - 1)] = std::sqrt(k / 2.0);
  Vec roots = jacobi_eigenvalues(diag, off);
  polish(roots, [n](double x) { return hermite_newton_step(n, x); });
  // Enforce the exact symmetry of the zero set.
  for (std::size_t i = 0, j = roots.size() - 1; i < j; ++i, --j) {
    const double r = 0.5 * (roots[i] - roots[j]);
    roots[i] = r;
    roots[j] = -r;
  }
  if (n % 2 == 1) roots[static_cast<std::size_t>(n / 2)] = 0.0;
  return roots;
}

Vec laguerre_zeros(int n, double alpha) {
  check_degree(n);
  if (alpha < -1.0) {
    throw Error(ErrorCode::AlphaOutOfRange, "Laguerre alpha must be >= -1");
  }
  if (alpha == -1.0) {
    // L_n^{(-1)}(x) = -(x/n) L_{n-1}^{(1)}(x)
    Vec roots = n > 1 ? laguerre_zeros(n - 1, 1.0) : Vec{};
    roots.push_back(0.0);
    return roots;
  }
  // Monic recurrence: diagonal 2k + alpha + 1, off-diagonal sqrt(k (k + alpha)).
  Vec diag(static_cast<std::size_t>(n));
  Vec off(static_cast<std::size_t>(n > 1 ? n - 1 : 0));
  for (int k = 0; k < n; ++k) diag[static_cast<std::size_t>(k)] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) off[static_cast<std::size_t>(k - 1)] = std::sqrt(k * (k + alpha));
  Vec roots = jacobi_eigenvalues(diag, off);
  polish(roots, [n, alpha](double x) { return laguerre_newton_step(n, alpha, x); });
  return roots;
}

Vec stationary_defect(const RootSystemSpec& spec, std::optional<double> nu,
                      std::span<const double> y) {
  check_regime(spec, nu);
  if (static_cast<int>(y.size()) != spec.n) {
    throw Error(ErrorCode::ConfigInvalid, "point dimension does not match n");
  }
  const int m = free_dim(spec, nu);
  const int n = spec.n;
  Vec out(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double h = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      h += 1.0 / (y[i] - y[j]);
      if (spec.kind != RootKind::A) h += 1.0 / (y[i] + y[j]);
    }
    if (spec.kind == RootKind::B && !pins_last(spec, nu)) h += *nu / y[i];
    out[static_cast<std::size_t>(i)] = h - 0.5 * y[i];
  }
  return out;
}

ChamberPoint zero_formula_point(const RootSystemSpec& spec, std::optional<double> nu) {
  check_regime(spec, nu);
  ChamberPoint y;
  switch (spec.kind) {
    case RootKind::A:
      y = hermite_zeros(spec.n);
      for (auto& v : y) v *= std::sqrt(2.0);
      return y;
    case RootKind::B:
      y = laguerre_zeros(spec.n, *nu == 0.0 ? -1.0 : *nu - 1.0);
      break;
    case RootKind::D:
      y = laguerre_zeros(spec.n - 1, 1.0);
      y.push_back(0.0);
      break;
  }
  for (auto& v : y) v = std::sqrt(2.0 * v);
  return y;
}

double objective_W(const RootSystemSpec& spec, std::optional<double> nu,
                   std::span<const double> x) {
  check_regime(spec, nu);
  if (!is_interior(spec, x)) {
    throw Error(ErrorCode::BoundaryPoint, "W is evaluated at interior points only");
  }
  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  // ln w_k with unit multiplicities gives the log terms of W directly.
  double logs = 0.0;
  switch (spec.kind) {
    case RootKind::A: logs = log_weight(spec, Multiplicity::a(1.0), x); break;
    case RootKind::B: logs = log_weight(spec, Multiplicity::b(*nu, 1.0), x); break;
    case RootKind::D: logs = log_weight(spec, Multiplicity::d(1.0), x); break;
  }
  return logs - 0.5 * norm2;
}

namespace {

// W restricted to the free coordinates (y_N = 0 pinned where applicable).
// The pinned point lies on the B wall, so the axis term is dropped there.
double free_objective(const RootSystemSpec& spec, std::optional<double> nu,
                      std::span<const double> y) {
  if (spec.kind == RootKind::A || !pins_last(spec, nu)) return objective_W(spec, nu, y);
  return objective_W(RootSystemSpec{RootKind::D, spec.n}, std::nullopt, y);
}

}  // namespace

FixedPointResult solve_stationary(const RootSystemSpec& spec, std::optional<double> nu,
                                  ChamberPoint start, double tol, int max_iter) {
  check_regime(spec, nu);
  if (static_cast<int>(start.size()) != spec.n) {
    throw Error(ErrorCode::ConfigInvalid, "start dimension does not match n");
  }
  const int m = free_dim(spec, nu);
  if (pins_last(spec, nu)) start.back() = 0.0;
  if (!free_part_interior(spec, nu, start)) {
    throw Error(ErrorCode::BoundaryPoint, "Newton start is not in the open chamber");
  }

  FixedPointResult result{std::move(start), 0.0, 0};
  Vec defect = stationary_defect(spec, nu, result.y);
  result.residual = max_abs(defect);
  double w = free_objective(spec, nu, result.y);

  while (result.residual > tol) {
    if (result.iterations >= max_iter) {
      std::ostringstream msg;
      msg << "stationary Newton did not converge in " << max_iter
          << " iterations; residual " << result.residual << "; iterate";
      for (double v : result.y) msg << ' ' << v;
      throw Error(ErrorCode::NoConvergence, msg.str());
    }
    ++result.iterations;
    const Eigen::MatrixXd jac = defect_jacobian(spec, nu, result.y);
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(defect.data(), m);
    const Eigen::VectorXd step = jac.partialPivLu().solve(-rhs);

    double scale = 1.0;
    bool accepted = false;
    while (scale >= std::ldexp(1.0, -20)) {
      ChamberPoint trial = result.y;
      for (int i = 0; i < m; ++i) trial[static_cast<std::size_t>(i)] += scale * step[i];
      if (free_part_interior(spec, nu, trial)) {
        const double w_trial = free_objective(spec, nu, trial);
        Vec d_trial = stationary_defect(spec, nu, trial);
        const double r_trial = max_abs(d_trial);
        // Ascent on W, or a residual decrease once W is flat to roundoff.
        const double flat = 1e-14 * std::max(1.0, std::abs(w));
        if (w_trial > w || (w_trial >= w - flat && r_trial < result.residual)) {
          result.y = std::move(trial);
          defect = std::move(d_trial);
          result.residual = r_trial;
          w = w_trial;
          accepted = true;
          break;
        }
      }
      scale *= 0.5;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "line search stalled at residual " << result.residual << "; iterate";
      for (double v : result.y) msg << ' ' << v;
      throw Error(ErrorCode::NoConvergence, msg.str());
    }
  }
  return result;
}

FixedPointResult frozen_fixed_point(const RootSystemSpec& spec, std::optional<double> nu) {
  return solve_stationary(spec, nu, zero_formula_point(spec, nu));
}

}  // namespace bessel
