#include "bessel/freeze_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "bessel/error.hpp"
#include "bessel/polyroots.hpp"

namespace bessel {

RootKind FreezingRegime::root_kind() const {
  switch (kind) {
    case Kind::A_k: return RootKind::A;
    case Kind::B_beta:
    case Kind::B_k1: return RootKind::B;
    case Kind::D_k: return RootKind::D;
  }
  return RootKind::A;
}

void FreezingRegime::validate() const {
  if (kind == Kind::B_beta && !(nu > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "B_beta regime needs nu > 0");
  }
  if (kind == Kind::B_k1 && !(k2 > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "B_k1 regime needs k2 > 0");
  }
}

Multiplicity FreezingRegime::multiplicity(double kappa) const {
  switch (kind) {
    case Kind::A_k: return Multiplicity::a(kappa);
    case Kind::B_beta: return Multiplicity::b(nu * kappa, kappa);
    case Kind::B_k1: return Multiplicity::b(kappa, k2);
    case Kind::D_k: return Multiplicity::d(kappa);
  }
  return {};
}

double FreezingRegime::kappa(const Multiplicity& mult) const {
  switch (kind) {
    case Kind::A_k:
    case Kind::D_k: return mult.k;
    case Kind::B_beta: return mult.k2;
    case Kind::B_k1: return mult.k1;
  }
  return 0.0;
}

GapNotion FreezingRegime::gap_notion() const {
  return kind == Kind::B_beta ? GapNotion::BScaledAxis : GapNotion::Euclidean;
}

std::string_view to_string(FreezingRegime::Kind kind) {
  switch (kind) {
    case FreezingRegime::Kind::A_k: return "A_k";
    case FreezingRegime::Kind::B_beta: return "B_beta";
    case FreezingRegime::Kind::B_k1: return "B_k1";
    case FreezingRegime::Kind::D_k: return "D_k";
  }
  return "?";
}

FreezingRegime::Kind parse_regime_kind(std::string_view text) {
  if (text == "A_k" || text == "A") return FreezingRegime::Kind::A_k;
  if (text == "B_beta") return FreezingRegime::Kind::B_beta;
  if (text == "B_k1") return FreezingRegime::Kind::B_k1;
  if (text == "D_k" || text == "D") return FreezingRegime::Kind::D_k;
  throw Error(ErrorCode::ConfigInvalid, "unknown freezing regime '" + std::string(text) + "'");
}

namespace {

void check_pair(const FreezingRegime& regime, const RootSystemSpec& spec) {
  regime.validate();
  spec.validate();
  if (regime.root_kind() != spec.kind) {
    throw Error(ErrorCode::ConfigInvalid, "regime " + std::string(to_string(regime.kind)) +
                                              " does not match root system " +
                                              std::string(to_string(spec.kind)));
  }
}

void field_into(const FreezingRegime& regime, std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  std::fill(out.begin(), out.end(), 0.0);
  if (regime.kind == FreezingRegime::Kind::B_k1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / x[i];
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double minus = 1.0 / (x[i] - x[j]);
      out[i] += minus;
      out[j] -= minus;
      if (regime.kind != FreezingRegime::Kind::A_k) {
        const double plus = 1.0 / (x[i] + x[j]);
        out[i] += plus;
        out[j] += plus;
      }
    }
  }
  if (regime.kind == FreezingRegime::Kind::B_beta) {
    for (std::size_t i = 0; i < n; ++i) out[i] += regime.nu / x[i];
  }
}

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kErr = {71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                        -17253.0 / 339200, 22.0 / 525,   -1.0 / 40};
}  // namespace

Vec frozen_field(const FreezingRegime& regime, const RootSystemSpec& spec,
                 std::span<const double> x) {
  check_pair(regime, spec);
  if (!is_interior(spec, x)) {
    throw Error(ErrorCode::BoundaryPoint, "frozen field requested at a non-interior point");
  }
  Vec out(x.size());
  field_into(regime, x, out);
  return out;
}

Trajectory ode_solve(const FreezingRegime& regime, const RootSystemSpec& spec,
                     std::span<const double> x0, std::span<const double> t_grid,
                     const OdeOptions& options) {
  check_pair(regime, spec);
  if (!is_interior(spec, x0)) {
    throw Error(ErrorCode::BoundaryPoint, "ODE start must be interior");
  }
  if (t_grid.empty() || t_grid.front() != 0.0) {
    throw Error(ErrorCode::GridMismatch, "time grid must start at 0");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw Error(ErrorCode::GridMismatch, "time grid must be strictly increasing");
    }
  }

  const std::size_t n = x0.size();
  Trajectory traj;
  traj.times.assign(t_grid.begin(), t_grid.end());
  traj.points.reserve(t_grid.size());
  traj.points.emplace_back(x0.begin(), x0.end());
  if (t_grid.size() == 1) return traj;

  const double t_end = t_grid.back();
  std::array<Vec, 7> k;
  for (auto& stage : k) stage.assign(n, 0.0);
  Vec y(x0.begin(), x0.end());
  Vec y_new(n), y_stage(n);
  field_into(regime, y, k[0]);

  auto err_scale = [&](double a, double b) {
    return options.atol + options.rtol * std::max(std::abs(a), std::abs(b));
  };

  // Initial step from the field magnitude relative to the state.
  double h;
  {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = err_scale(y[i], y[i]);
      d0 += (y[i] / s) * (y[i] / s);
      d1 += (k[0][i] / s) * (k[0][i] / s);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, t_end);
  }

  // Steps are shortened to land exactly on grid times, so every output point
  // carries the controlled step error rather than interpolation error. The
  // controller's own proposal survives such truncations.
  double t = 0.0;
  std::size_t next_out = 1;
  while (next_out < t_grid.size()) {
    if (h < options.min_step) {
      throw Error(ErrorCode::StepFailure,
                  "step size underflow at t=" + std::to_string(t));
    }
    const double to_grid = t_grid[next_out] - t;
    const bool lands = h >= to_grid * (1.0 - 1e-12);
    const double step = lands ? to_grid : h;

    bool stages_ok = true;
    for (int s = 1; s < 7 && stages_ok; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += kA[s][j] * k[static_cast<std::size_t>(j)][i];
        y_stage[i] = y[i] + step * acc;
      }
      if (!is_interior(spec, y_stage)) {
        stages_ok = false;
        break;
      }
      field_into(regime, y_stage, k[static_cast<std::size_t>(s)]);
      if (s == 6) y_new = y_stage;
    }
    if (!stages_ok) {
      h = 0.25 * step;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = 0.0;
      for (int s = 0; s < 7; ++s) e += kErr[static_cast<std::size_t>(s)] * k[static_cast<std::size_t>(s)][i];
      e *= step / err_scale(y[i], y_new[i]);
      err += e * e;
    }
    err = std::sqrt(err / n);

    if (err > 1.0) {
      h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    t = lands ? t_grid[next_out] : t + step;
    y = y_new;
    k[0] = k[6];
    if (lands) {
      if (!is_interior(spec, y)) {
        throw Error(ErrorCode::StepFailure, "solution left the open chamber");
      }
      traj.points.push_back(y);
      ++next_out;
    }
    const double growth = err == 0.0 ? 10.0 : std::min(10.0, 0.9 * std::pow(err, -0.2));
    h = lands ? std::max(h, step * growth) : step * growth;
  }
  return traj;
}

ChamberPoint self_similar_base(const FreezingRegime& regime, const RootSystemSpec& spec) {
  check_pair(regime, spec);
  switch (regime.kind) {
    case FreezingRegime::Kind::A_k: return hermite_zeros(spec.n);
    case FreezingRegime::Kind::B_beta: return frozen_fixed_point(spec, regime.nu).y;
    case FreezingRegime::Kind::D_k: return frozen_fixed_point(spec).y;
    case FreezingRegime::Kind::B_k1: break;
  }
  throw Error(ErrorCode::UnsupportedRegime,
              "B_k1 has no self-similar family; use b_k1_closed_form");
}

ChamberPoint explicit_solution(const FreezingRegime& regime, const RootSystemSpec& spec,
                               double c, double t) {
  if (!(c > 0.0) || !(t >= 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "explicit solution needs c > 0 and t >= 0");
  }
  ChamberPoint z = self_similar_base(regime, spec);
  const double scale = regime.kind == FreezingRegime::Kind::A_k ? std::sqrt(2.0 * t + c * c)
                                                                 : std::sqrt(t + c * c);
  for (auto& v : z) v *= scale;
  return z;
}

ChamberPoint b_k1_closed_form(std::span<const double> x0, double t) {
  ChamberPoint out(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) out[i] = std::sqrt(2.0 * t + x0[i] * x0[i]);
  return out;
}

Vec min_gap_profile(const Trajectory& trajectory, const FreezingRegime& regime) {
  Vec profile;
  profile.reserve(trajectory.size());
  for (const auto& x : trajectory.points) {
    const std::size_t n = x.size();
    double gap = std::numeric_limits<double>::infinity();
    if (regime.kind == FreezingRegime::Kind::B_k1) {
      for (double v : x) gap = std::min(gap, v);
      profile.push_back(gap);
      continue;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) gap = std::min(gap, x[i] - x[i + 1]);
    if (regime.kind == FreezingRegime::Kind::D_k && n >= 2) {
      gap = std::min(gap, x[n - 2] + x[n - 1]);
    }
    if (regime.kind == FreezingRegime::Kind::B_beta) {
      const double factor = n > 1 ? static_cast<double>(n - 1) : 1.0;
      gap = std::min(gap, factor * x[n - 1] / regime.nu);
    }
    profile.push_back(gap);
  }
  return profile;
}

}  // namespace bessel
