#pragma once

// Deterministic freezing-limit dynamics dx/dt = H(x) and their self-similar
// solutions.

#include <span>
#include <string>
#include <string_view>

#include "bessel/chamber.hpp"

namespace bessel {

/// Which frozen field applies, and how the multiplicity scale kappa is read.
///   A_k     H_i = sum_{j!=i} 1/(x_i - x_j),                     kappa = k
///   B_beta  (k1,k2) = (nu b, b): +/- pair terms plus nu/x_i,   kappa = b = k2
///   B_k1    k2 fixed, k1 -> oo: H_i = 1/x_i,                    kappa = k1
///   D_k     +/- pair terms only,                                kappa = k
struct FreezingRegime {
  enum class Kind { A_k, B_beta, B_k1, D_k };

  Kind kind = Kind::A_k;
  double nu = 0.0;  ///< B_beta only
  double k2 = 0.0;  ///< B_k1 only

  static FreezingRegime a() { return {Kind::A_k, 0.0, 0.0}; }
  static FreezingRegime b_beta(double nu) { return {Kind::B_beta, nu, 0.0}; }
  static FreezingRegime b_k1(double k2) { return {Kind::B_k1, 0.0, k2}; }
  static FreezingRegime d() { return {Kind::D_k, 0.0, 0.0}; }

  RootKind root_kind() const;
  void validate() const;

  /// Multiplicity realizing this regime at scale kappa.
  Multiplicity multiplicity(double kappa) const;
  /// Scale kappa read back from a multiplicity.
  double kappa(const Multiplicity& mult) const;
  /// Wall-distance notion used for this regime's gap statistics and guards.
  GapNotion gap_notion() const;
};

std::string_view to_string(FreezingRegime::Kind kind);
FreezingRegime::Kind parse_regime_kind(std::string_view text);

struct Trajectory {
  Vec times;
  std::vector<ChamberPoint> points;

  std::size_t size() const { return times.size(); }
};

Vec frozen_field(const FreezingRegime& regime, const RootSystemSpec& spec,
                 std::span<const double> x);

struct OdeOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
  double min_step = 1e-14;
};

/// Adaptive Dormand-Prince 5(4); steps land exactly on every grid time.
/// t_grid must start at 0 and be strictly increasing.
Trajectory ode_solve(const FreezingRegime& regime, const RootSystemSpec& spec,
                     std::span<const double> x0, std::span<const double> t_grid,
                     const OdeOptions& options = {});

/// Base vector z of the self-similar family phi(t, c z) = s(t) z:
///   A: Hermite zeros (not scaled by sqrt 2), s(t) = sqrt(2t + c^2)
///   B_beta, D: frozen fixed point y, s(t) = sqrt(t + c^2)
ChamberPoint self_similar_base(const FreezingRegime& regime, const RootSystemSpec& spec);

/// phi(t, c z) for the family above. UnsupportedRegime for B_k1.
ChamberPoint explicit_solution(const FreezingRegime& regime, const RootSystemSpec& spec,
                               double c, double t);

/// phi(t, x0) = (sqrt(2t + x0_i^2))_i for B_k1.
ChamberPoint b_k1_closed_form(std::span<const double> x0, double t);

/// Per time point: the regime's gap statistic.
///   A: min_i x_i - x_{i+1}
///   D: as A together with x_{N-1} + x_N
///   B_beta: as A together with (N-1) x_N / nu
///   B_k1: min_i x_i
Vec min_gap_profile(const Trajectory& trajectory, const FreezingRegime& regime);

}  // namespace bessel
