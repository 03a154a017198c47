#pragma once

// Counter-based Gaussian noise and a Brownian path that can be refined on
// dyadic sub-grids without changing its coarser values.

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace bessel {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-path seed: seed XOR splitmix64(path index).
constexpr std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ splitmix64(index);
}

/// Standard normal variate that is a pure function of (key, a, b, c).
double keyed_normal(std::uint64_t key, std::uint64_t a, std::uint64_t b, std::uint64_t c);

/// Standard normal variates drawn sequentially from a keyed stream.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t key) : key_(key) {}
  double operator()() { return keyed_normal(key_, 0xA11CEULL, counter_++, 0); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Brownian motion in R^dim on [0, n_steps * dt]. Values at base grid points
/// come from keyed increments; values at dyadic points inside a base interval
/// come from Brownian-bridge midpoints keyed by (interval, level, index), so a
/// point's value never depends on which other points were queried.
class DyadicBrownian {
 public:
  DyadicBrownian(std::uint64_t key, std::size_t dim, double dt);

  std::size_t dim() const { return dim_; }

  /// Moves to base interval `m`; `w_left` must be W(m dt). Returns W((m+1) dt).
  std::span<const double> enter_interval(std::uint64_t m, std::span<const double> w_left);

  /// W(m dt + r dt / 2^level) for 0 <= r <= 2^level inside the current interval.
  std::span<const double> at(int level, std::uint64_t r);

 private:
  std::uint64_t node_key(int level, std::uint64_t r) const {
    return (static_cast<std::uint64_t>(level) << 58) ^ r;
  }

  std::uint64_t key_;
  std::size_t dim_;
  double dt_;
  std::uint64_t interval_ = 0;
  std::vector<double> left_, right_;
  std::unordered_map<std::uint64_t, std::vector<double>> cache_;
};

}  // namespace bessel
