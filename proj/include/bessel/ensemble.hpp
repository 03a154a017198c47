#pragma once

// Path ensembles. Every path is a pure function of (seed, path index), so the
// OpenMP kernels and the serial reference produce identical results.

#include <functional>
#include <optional>
#include <vector>

#include "bessel/bessel_sde.hpp"

namespace bessel {

/// Thread count: `requested` if positive, else BESSEL_FREEZE_THREADS if set,
/// else the OpenMP default.
int resolve_threads(int requested = 0);

/// Runs body(i) for i in [0, count) on up to `threads` OpenMP threads.
void parallel_for_index(std::size_t count, int threads,
                        const std::function<void(std::size_t)>& body);

/// All cfg.n_paths paths of the raw SDE (or the normalized SDE when kappa is
/// given), in path-index order.
std::vector<PathResult> simulate_ensemble(const SimConfig& cfg,
                                          std::optional<double> kappa = std::nullopt,
                                          int threads = 0);

/// Serial reference for simulate_ensemble.
std::vector<PathResult> simulate_ensemble_serial(const SimConfig& cfg,
                                                 std::optional<double> kappa = std::nullopt);

}  // namespace bessel
