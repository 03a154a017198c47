#include "bessel/bessel_sde.hpp"

#include <cmath>

#include "bessel/error.hpp"
#include "bessel/noise.hpp"

namespace bessel {

namespace {

constexpr int kMaxRefinement = 20;

GapNotion guard_notion(const SimConfig& cfg) {
  return cfg.regime ? cfg.regime->gap_notion() : GapNotion::Euclidean;
}

std::optional<double> guard_nu(const SimConfig& cfg) {
  if (cfg.regime && cfg.regime->kind == FreezingRegime::Kind::B_beta) return cfg.regime->nu;
  return std::nullopt;
}

double gap_of(const SimConfig& cfg, std::span<const double> x) {
  return boundary_gap(cfg.spec, x, guard_notion(cfg), guard_nu(cfg));
}

PathResult simulate_scaled(const SimConfig& cfg, std::size_t index, double drift_scale,
                           double noise_scale) {
  cfg.validate();
  const std::size_t n = cfg.start.size();
  const std::size_t steps = cfg.n_steps();
  const double dt = cfg.step();
  const double guard = cfg.resolved_guard();

  PathResult result;
  result.seed_used = path_seed(cfg.seed, index);
  DyadicBrownian brownian(result.seed_used, n, dt);

  ChamberPoint x = cfg.start;
  Vec w_left(n, 0.0), w_cur(n), drift_buf(n), x_new(n);
  result.trajectory.times.push_back(0.0);
  result.trajectory.points.push_back(x);

  for (std::size_t m = 0; m < steps; ++m) {
    const double t0 = static_cast<double>(m) * dt;
    std::span<const double> w_right;
    if (!cfg.zero_noise) w_right = brownian.enter_interval(m, w_left);
    w_cur = w_left;

    int level = 0;
    std::uint64_t r = 0;
    while (!(level == 0 && r == 1)) {
      const double h = std::ldexp(dt, -level);
      std::span<const double> w_next;
      if (!cfg.zero_noise) w_next = brownian.at(level, r + 1);
      drift_into(cfg.spec, cfg.mult, x, drift_buf);
      for (std::size_t i = 0; i < n; ++i) {
        x_new[i] = x[i] + drift_scale * drift_buf[i] * h;
        if (!cfg.zero_noise) x_new[i] += noise_scale * (w_next[i] - w_cur[i]);
      }
      const double t_here = t0 + static_cast<double>(r) * h;
      if (is_interior(cfg.spec, x_new) && gap_of(cfg, x_new) >= 0.5 * guard) {
        x.swap(x_new);
        if (!cfg.zero_noise) w_cur.assign(w_next.begin(), w_next.end());
        ++r;
        while (level > 0 && r % 2 == 0) {
          --level;
          r /= 2;
        }
        if (gap_of(cfg, x) < guard) {
          result.exited = true;
          result.exit_time = t0 + static_cast<double>(r) * std::ldexp(dt, -level);
          result.trajectory.times.push_back(*result.exit_time);
          result.trajectory.points.push_back(x);
          return result;
        }
      } else {
        ++result.rejections;
        if (level == kMaxRefinement) {
          result.exited = true;
          result.exit_time = t_here;
          result.trajectory.times.push_back(t_here);
          result.trajectory.points.push_back(x);
          return result;
        }
        ++level;
        r *= 2;
      }
    }
    if (!cfg.zero_noise) w_left.assign(w_right.begin(), w_right.end());
    if ((m + 1) % cfg.record_stride == 0 || m + 1 == steps) {
      result.trajectory.times.push_back(m + 1 == steps ? cfg.horizon
                                                       : static_cast<double>(m + 1) * dt);
      result.trajectory.points.push_back(x);
    }
  }
  return result;
}

}  // namespace

void SimConfig::validate() const {
  spec.validate();
  if (mult.min_component(spec) < 0.5) {
    throw Error(ErrorCode::ConfigInvalid,
                "multiplicity components must be >= 1/2 for the SDE to stay interior");
  }
  if (static_cast<int>(start.size()) != spec.n) {
    throw Error(ErrorCode::ConfigInvalid, "start has wrong dimension");
  }
  if (!is_interior(spec, start)) {
    throw Error(ErrorCode::ConfigInvalid, "start must lie in the open chamber");
  }
  if (!(horizon > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "horizon and dt must be positive");
  }
  if (n_paths < 1) throw Error(ErrorCode::ConfigInvalid, "n_paths must be >= 1");
  if (record_stride < 1) throw Error(ErrorCode::ConfigInvalid, "record_stride must be >= 1");
  if (regime) {
    regime->validate();
    if (regime->root_kind() != spec.kind) {
      throw Error(ErrorCode::ConfigInvalid, "regime does not match root system");
    }
  }
  if (guard_eps && !(*guard_eps > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "guard_eps must be positive");
  }
  if (!(gap_of(*this, start) > resolved_guard())) {
    throw Error(ErrorCode::ConfigInvalid, "boundary gap of start must exceed guard_eps");
  }
}

double SimConfig::resolved_guard() const {
  if (guard_eps) return *guard_eps;
  const double g = gap_of(*this, start);
  // Single free particle of type A: no walls.
  return std::isfinite(g) ? g / 10.0 : 1.0;
}

std::size_t SimConfig::n_steps() const {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(horizon / dt - 1e-9)));
}

double SimConfig::step() const { return horizon / static_cast<double>(n_steps()); }

PathResult simulate_path(const SimConfig& cfg, std::size_t path_index) {
  return simulate_scaled(cfg, path_index, 1.0, 1.0);
}

PathResult simulate_normalized(const SimConfig& cfg, double kappa, std::size_t path_index) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::ConfigInvalid, "kappa must be positive");
  return simulate_scaled(cfg, path_index, 1.0 / kappa, 1.0 / std::sqrt(kappa));
}

LlnError lln_error(const PathResult& path, const FreezingRegime& regime,
                   const RootSystemSpec& spec, std::span<const double> x, double kappa) {
  const auto& traj = path.trajectory;
  if (traj.size() == 0 || traj.times.front() != 0.0) {
    throw Error(ErrorCode::GridMismatch, "path grid must start at t = 0");
  }
  for (const auto& p : traj.points) {
    if (p.size() != x.size()) throw Error(ErrorCode::GridMismatch, "dimension mismatch");
  }
  const Trajectory phi = ode_solve(regime, spec, x, traj.times);
  const double root = std::sqrt(kappa);
  LlnError err;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = traj.points[s][i] - root * phi.points[s][i];
      d2 += d * d;
    }
    err.absolute = std::max(err.absolute, std::sqrt(d2));
  }
  err.scaled = err.absolute / root;
  return err;
}

}  // namespace bessel
