#pragma once

// Weyl chamber geometry for the root systems A_{N-1}, B_N and D_N: chamber
// membership, weight functions, drift fields and distances to the walls.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bessel {

using Vec = std::vector<double>;

/// Ordered configuration x_1 >= ... >= x_N in a closed Weyl chamber.
using ChamberPoint = std::vector<double>;

enum class RootKind { A, B, D };

std::string_view to_string(RootKind kind);
RootKind parse_root_kind(std::string_view text);

struct RootSystemSpec {
  RootKind kind = RootKind::A;
  int n = 1;

  /// Throws ConfigInvalid for n < 1, or n < 2 with kind D.
  void validate() const;
};

/// Coupling constants. A and D read `k`; B reads `k1` (axis) and `k2` (pair).
struct Multiplicity {
  double k = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;

  static Multiplicity a(double k) { return {k, 0.0, 0.0}; }
  static Multiplicity b(double k1, double k2) { return {0.0, k1, k2}; }
  static Multiplicity d(double k) { return {k, 0.0, 0.0}; }

  /// Homogeneity degree: w_k(c x) = c^{2 gamma} w_k(x).
  double gamma(const RootSystemSpec& spec) const;

  /// Smallest component relevant to `spec` (k for A/D, min(k1,k2) for B;
  /// k2 is ignored for B with n = 1).
  double min_component(const RootSystemSpec& spec) const;
};

bool in_closed_chamber(const RootSystemSpec& spec, std::span<const double> x);
bool is_interior(const RootSystemSpec& spec, std::span<const double> x);

/// ln w_k(x). Throws BoundaryPoint when a log argument is below 1e-300.
double log_weight(const RootSystemSpec& spec, const Multiplicity& mult,
                  std::span<const double> x);

/// 1/2 grad ln w_k(x), the SDE drift.
Vec drift(const RootSystemSpec& spec, const Multiplicity& mult, std::span<const double> x);

/// Allocation-free variant for hot loops. Does not check interiority; the
/// caller guarantees it.
void drift_into(const RootSystemSpec& spec, const Multiplicity& mult,
                std::span<const double> x, std::span<double> out);

enum class GapNotion {
  /// Euclidean distance to the chamber boundary (A, D, and B for k1 -> oo).
  Euclidean,
  /// min{x_i - x_{i+1}} together with (N-1) x_N / nu (B with (k1,k2) = (nu b, b)).
  BScaledAxis,
};

/// Largest eps with x in U_eps for the chosen notion; 0 on or outside the
/// boundary, +inf for type A with n = 1. BScaledAxis needs nu (MissingNu).
double boundary_gap(const RootSystemSpec& spec, std::span<const double> x,
                    GapNotion notion = GapNotion::Euclidean,
                    std::optional<double> nu = std::nullopt);

}  // namespace bessel
