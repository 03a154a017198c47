#pragma once

// Zeros of Hermite and Laguerre polynomials and the stationary points of the
// frozen dynamics they describe.

#include <optional>
#include <span>

#include "bessel/chamber.hpp"

namespace bessel {

/// Zeros of the physicists' Hermite polynomial H_n (weight e^{-x^2}),
/// descending. 1 <= n <= 200.
Vec hermite_zeros(int n);

/// Zeros of the generalized Laguerre polynomial L_n^{(alpha)}, descending.
/// alpha = -1 is accepted and yields {0} together with the zeros of
/// L_{n-1}^{(1)}.
Vec laguerre_zeros(int n, double alpha);

struct FixedPointResult {
  ChamberPoint y;
  double residual = 0.0;  ///< max-norm of the stationary-equation defect
  int iterations = 0;
};

/// Residual of the stationary system H(y) = y/2 of the frozen field. For D,
/// and for B with nu = 0, the last coordinate is pinned to 0 and excluded.
Vec stationary_defect(const RootSystemSpec& spec, std::optional<double> nu,
                      std::span<const double> y);

/// Closed-form maximizer of W built from polynomial zeros:
///   A: sqrt(2) * hermite_zeros(N)
///   B: sqrt(2 * laguerre_zeros(N, nu - 1))   (nu = 0 uses alpha = -1)
///   D: sqrt(2 * laguerre_zeros(N - 1, 1)) followed by 0
ChamberPoint zero_formula_point(const RootSystemSpec& spec, std::optional<double> nu = std::nullopt);

/// Damped Newton on the stationary system, started from zero_formula_point.
/// Converges to residual <= 1e-12 or throws NoConvergence.
FixedPointResult frozen_fixed_point(const RootSystemSpec& spec,
                                    std::optional<double> nu = std::nullopt);

/// Damped Newton from an arbitrary interior start. Exposed so the basin can be
/// probed independently of the closed form.
FixedPointResult solve_stationary(const RootSystemSpec& spec, std::optional<double> nu,
                                  ChamberPoint start, double tol = 1e-12, int max_iter = 100);

/// The log-density exponent W whose maximizer is the frozen fixed point.
double objective_W(const RootSystemSpec& spec, std::optional<double> nu,
                   std::span<const double> x);

}  // namespace bessel
