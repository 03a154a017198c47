#include "bessel/noise.hpp"

#include <cmath>
#include <numbers>

namespace bessel {

namespace {

// 53-bit uniform in (0, 1).
double open_uniform(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double keyed_normal(std::uint64_t key, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(key ^ splitmix64(a ^ splitmix64(b ^ splitmix64(c))));
  const double u1 = open_uniform(h);
  const double u2 = open_uniform(splitmix64(h));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

DyadicBrownian::DyadicBrownian(std::uint64_t key, std::size_t dim, double dt)
    : key_(key), dim_(dim), dt_(dt), left_(dim), right_(dim) {}

std::span<const double> DyadicBrownian::enter_interval(std::uint64_t m,
                                                        std::span<const double> w_left) {
  interval_ = m;
  cache_.clear();
  const double sd = std::sqrt(dt_);
  for (std::size_t i = 0; i < dim_; ++i) {
    left_[i] = w_left[i];
    right_[i] = w_left[i] + sd * keyed_normal(key_, m, 0, i);
  }
  return right_;
}

std::span<const double> DyadicBrownian::at(int level, std::uint64_t r) {
  // Reduce to the coarsest level on which this point lives.
  while (level > 0 && r % 2 == 0) {
    --level;
    r /= 2;
  }
  if (level == 0) return r == 0 ? std::span<const double>(left_) : std::span<const double>(right_);

  const std::uint64_t key = node_key(level, r);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  // Bridge midpoint between the neighbouring level-(level-1) points.
  // Map references stay valid across inserts.
  const auto lo = at(level - 1, (r - 1) / 2);
  const auto hi = at(level - 1, (r + 1) / 2);
  const double sd = std::sqrt(dt_ / std::ldexp(1.0, level + 1));
  std::vector<double> mid(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    mid[i] = 0.5 * (lo[i] + hi[i]) +
             sd * keyed_normal(key_, interval_, static_cast<std::uint64_t>(level) << 32 | 1u,
                               r * dim_ + i);
  }
  return cache_.emplace(key, std::move(mid)).first->second;
}

}  // namespace bessel
