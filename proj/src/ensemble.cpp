#include "bessel/ensemble.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bessel/error.hpp"

namespace bessel {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BESSEL_FREEZE_THREADS"); env && *env) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ConfigInvalid,
                std::string("BESSEL_FREEZE_THREADS must be a positive integer, got '") + env + "'");
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void parallel_for_index(std::size_t count, int threads,
                        const std::function<void(std::size_t)>& body) {
  const int nthreads = resolve_threads(threads);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 4) num_threads(nthreads)
  for (long long i = 0; i < total; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

namespace {

PathResult run_one(const SimConfig& cfg, std::optional<double> kappa, std::size_t i) {
  return kappa ? simulate_normalized(cfg, *kappa, i) : simulate_path(cfg, i);
}

}  // namespace

std::vector<PathResult> simulate_ensemble(const SimConfig& cfg, std::optional<double> kappa,
                                          int threads) {
  cfg.validate();
  std::vector<PathResult> out(cfg.n_paths);
  parallel_for_index(cfg.n_paths, threads,
                     [&](std::size_t i) { out[i] = run_one(cfg, kappa, i); });
  return out;
}

std::vector<PathResult> simulate_ensemble_serial(const SimConfig& cfg,
                                                 std::optional<double> kappa) {
  cfg.validate();
  std::vector<PathResult> out;
  out.reserve(cfg.n_paths);
  for (std::size_t i = 0; i < cfg.n_paths; ++i) out.push_back(run_one(cfg, kappa, i));
  return out;
}

}  // namespace bessel
