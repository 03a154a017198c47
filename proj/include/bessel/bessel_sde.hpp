#pragma once

// Euler-Maruyama simulation of multivariate Bessel processes with
// reject-and-halve guards against leaving the Weyl chamber.

#include <cstdint>
#include <optional>

#include "bessel/chamber.hpp"
#include "bessel/freeze_ode.hpp"

namespace bessel {

struct SimConfig {
  RootSystemSpec spec;
  Multiplicity mult;
  /// Selects the wall-distance notion for guards (B_beta uses the scaled-axis
  /// gap with its nu); Euclidean otherwise.
  std::optional<FreezingRegime> regime;
  ChamberPoint start;
  double horizon = 1.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  std::size_t n_paths = 1;
  /// Minimum boundary gap; defaults to boundary_gap(start) / 10.
  std::optional<double> guard_eps;
  /// Store every `record_stride`-th base grid point (the last is always kept).
  std::size_t record_stride = 1;
  /// Test hook: drop the Brownian term.
  bool zero_noise = false;

  /// Throws ConfigInvalid on any violated invariant.
  void validate() const;
  double resolved_guard() const;
  std::size_t n_steps() const;
  double step() const;  ///< horizon / n_steps()
};

struct PathResult {
  Trajectory trajectory;
  bool exited = false;
  std::optional<double> exit_time;
  std::uint64_t seed_used = 0;
  std::size_t rejections = 0;
};

/// Simulates path `path_index` of the raw SDE dX = dB + 1/2 grad ln w_k(X) dt.
PathResult simulate_path(const SimConfig& cfg, std::size_t path_index = 0);

/// Simulates X/sqrt(kappa) directly:
///   dX~ = dB / sqrt(kappa) + (1/kappa) * 1/2 grad ln w_k(X~) dt.
/// cfg.start and cfg.guard_eps are in normalized coordinates.
PathResult simulate_normalized(const SimConfig& cfg, double kappa, std::size_t path_index = 0);

struct LlnError {
  double absolute = 0.0;  ///< sup_s |X_s - sqrt(kappa) phi(s, x)|
  double scaled = 0.0;    ///< absolute / sqrt(kappa) = sup_s |X_s / sqrt(kappa) - phi(s, x)|
};

/// Sup-distance of a raw path (started at sqrt(kappa) x + y) from the scaled
/// frozen solution on the path's own time grid.
LlnError lln_error(const PathResult& path, const FreezingRegime& regime,
                   const RootSystemSpec& spec, std::span<const double> x, double kappa);

}  // namespace bessel
