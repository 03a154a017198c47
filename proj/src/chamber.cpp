#include "bessel/chamber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bessel/error.hpp"

namespace bessel {

namespace {

constexpr double kLogFloor = 1e-300;

double safe_log(double v) {
  if (!(v >= kLogFloor)) {
    throw Error(ErrorCode::BoundaryPoint, "log argument " + std::to_string(v) + " is not positive");
  }
  return std::log(v);
}

void check_size(const RootSystemSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.n) {
    throw Error(ErrorCode::ConfigInvalid, "point has " + std::to_string(x.size()) +
                                              " coordinates, root system has n=" +
                                              std::to_string(spec.n));
  }
}

}  // namespace

std::string_view to_string(RootKind kind) {
  switch (kind) {
    case RootKind::A: return "A";
    case RootKind::B: return "B";
    case RootKind::D: return "D";
  }
  return "?";
}

RootKind parse_root_kind(std::string_view text) {
  if (text == "A" || text == "a") return RootKind::A;
  if (text == "B" || text == "b") return RootKind::B;
  if (text == "D" || text == "d") return RootKind::D;
  throw Error(ErrorCode::ConfigInvalid, "unknown root system '" + std::string(text) + "'");
}

void RootSystemSpec::validate() const {
  if (n < 1) throw Error(ErrorCode::ConfigInvalid, "particle count must be >= 1");
  if (kind == RootKind::D && n < 2) {
    throw Error(ErrorCode::ConfigInvalid, "root system D needs n >= 2");
  }
}

double Multiplicity::gamma(const RootSystemSpec& spec) const {
  const double n = spec.n;
  switch (spec.kind) {
    case RootKind::A: return k * n * (n - 1) / 2.0;
    case RootKind::B: return k2 * n * (n - 1) + k1 * n;
    case RootKind::D: return k * n * (n - 1);
  }
  return 0.0;
}

double Multiplicity::min_component(const RootSystemSpec& spec) const {
  if (spec.kind != RootKind::B) return k;
  return spec.n == 1 ? k1 : std::min(k1, k2);
}

bool in_closed_chamber(const RootSystemSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.n) return false;
  const std::size_t n = x.size();
  const std::size_t ordered = spec.kind == RootKind::D ? n - 1 : n;
  for (std::size_t i = 0; i + 1 < ordered; ++i) {
    if (!(x[i] >= x[i + 1])) return false;
  }
  switch (spec.kind) {
    case RootKind::A: return true;
    case RootKind::B: return x[n - 1] >= 0.0;
    case RootKind::D: return n < 2 || x[n - 2] >= std::abs(x[n - 1]);
  }
  return false;
}

bool is_interior(const RootSystemSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.n) return false;
  const std::size_t n = x.size();
  const std::size_t ordered = spec.kind == RootKind::D ? n - 1 : n;
  for (std::size_t i = 0; i + 1 < ordered; ++i) {
    if (!(x[i] > x[i + 1])) return false;
  }
  switch (spec.kind) {
    case RootKind::A: return true;
    case RootKind::B: return x[n - 1] > 0.0;
    case RootKind::D: return n >= 2 && x[n - 2] > std::abs(x[n - 1]);
  }
  return false;
}

double log_weight(const RootSystemSpec& spec, const Multiplicity& mult,
                  std::span<const double> x) {
  check_size(spec, x);
  const std::size_t n = x.size();
  double pairs = 0.0;
  double axes = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (spec.kind == RootKind::A) {
        pairs += safe_log(x[i] - x[j]);
      } else {
        // ln(x_i^2 - x_j^2) split so that neither factor loses precision.
        pairs += safe_log(x[i] - x[j]) + safe_log(x[i] + x[j]);
      }
    }
  }
  switch (spec.kind) {
    case RootKind::A: return 2.0 * mult.k * pairs;
    case RootKind::B:
      for (std::size_t i = 0; i < n; ++i) axes += safe_log(x[i]);
      return 2.0 * mult.k2 * pairs + 2.0 * mult.k1 * axes;
    case RootKind::D: return 2.0 * mult.k * pairs;
  }
  return 0.0;
}

void drift_into(const RootSystemSpec& spec, const Multiplicity& mult,
                std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  std::fill(out.begin(), out.end(), 0.0);
  if (spec.kind == RootKind::A) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double r = 1.0 / (x[i] - x[j]);
        out[i] += r;
        out[j] -= r;
      }
    }
    for (auto& v : out) v *= mult.k;
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double minus = 1.0 / (x[i] - x[j]);
      const double plus = 1.0 / (x[i] + x[j]);
      out[i] += minus + plus;
      out[j] += plus - minus;
    }
  }
  const double pair = spec.kind == RootKind::B ? mult.k2 : mult.k;
  for (auto& v : out) v *= pair;
  if (spec.kind == RootKind::B) {
    for (std::size_t i = 0; i < n; ++i) out[i] += mult.k1 / x[i];
  }
}

Vec drift(const RootSystemSpec& spec, const Multiplicity& mult, std::span<const double> x) {
  check_size(spec, x);
  if (!is_interior(spec, x)) {
    throw Error(ErrorCode::BoundaryPoint, "drift requested at a non-interior point");
  }
  Vec out(x.size());
  drift_into(spec, mult, x, out);
  return out;
}

double boundary_gap(const RootSystemSpec& spec, std::span<const double> x, GapNotion notion,
                    std::optional<double> nu) {
  check_size(spec, x);
  if (notion == GapNotion::BScaledAxis) {
    if (spec.kind != RootKind::B) {
      throw Error(ErrorCode::ConfigInvalid, "scaled-axis gap is defined for type B only");
    }
    if (!nu || !(*nu > 0.0)) {
      throw Error(ErrorCode::MissingNu, "scaled-axis gap needs nu > 0");
    }
  }
  if (!in_closed_chamber(spec, x)) return 0.0;

  const std::size_t n = x.size();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  double gap = std::numeric_limits<double>::infinity();
  const std::size_t ordered = spec.kind == RootKind::D ? n - 1 : n;
  const double pair_scale = notion == GapNotion::Euclidean ? inv_sqrt2 : 1.0;
  for (std::size_t i = 0; i + 1 < ordered; ++i) {
    gap = std::min(gap, (x[i] - x[i + 1]) * pair_scale);
  }
  switch (spec.kind) {
    case RootKind::A: break;
    case RootKind::B:
      if (notion == GapNotion::Euclidean) {
        gap = std::min(gap, x[n - 1]);
      } else {
        // (N-1) x_N / nu; for N = 1 the factor is taken as 1.
        const double factor = n > 1 ? static_cast<double>(n - 1) : 1.0;
        gap = std::min(gap, factor * x[n - 1] / *nu);
      }
      break;
    case RootKind::D:
      gap = std::min(gap, (x[n - 2] - x[n - 1]) * inv_sqrt2);
      gap = std::min(gap, (x[n - 2] + x[n - 1]) * inv_sqrt2);
      break;
  }
  return std::max(gap, 0.0);
}

}  // namespace bessel
