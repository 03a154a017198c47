#pragma once

// Closed-form normal limits, independent Monte Carlo oracles and
// Kolmogorov-Smirnov utilities used to check the freezing limits.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bessel/chamber.hpp"
#include "bessel/freeze_ode.hpp"

namespace bessel {

struct NormalPrediction {
  Vec mean;
  Vec variance_diag;
};

/// n_samples x dim draws, row-major.
struct SampleSet {
  std::size_t dim = 1;
  Vec draws;
  std::string label;
  std::uint64_t seed = 0;

  std::size_t size() const { return dim == 0 ? 0 : draws.size() / dim; }
  double at(std::size_t sample, std::size_t coord) const { return draws[sample * dim + coord]; }
  Vec column(std::size_t coord) const;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  double std_error_mean = 0.0;
  double std_error_variance = 0.0;  ///< from the sample fourth central moment
};

Moments sample_moments(std::span<const double> values);

// -- predictions ------------------------------------------------------------

/// Limit law of X_t - sqrt(k1) (sqrt(2t + x_i^2))_i as k1 -> oo (k2 fixed).
NormalPrediction clt_b2_prediction(std::span<const double> x, double t);
/// sqrt(k1) (sqrt(2t + x_i^2))_i.
Vec clt_b2_centering(std::span<const double> x, double t, double k1);

/// Limit law of (X_i^2 - x_i^2 k1 - 2 sqrt(k1) x_i y_i - 2 k1 t) / sqrt(k1).
NormalPrediction clt_squared_prediction(std::span<const double> x, double t);

/// Limit law (dimension 1) of |X_t| - sqrt(gamma + (N-1)/2) sqrt(2t + |x|^2).
NormalPrediction norm_clt_prediction(std::span<const double> x, double t, double gamma);
double norm_clt_centering(std::span<const double> x, double t, double gamma);

// -- oracles ----------------------------------------------------------------

/// Draws of S = sum_{l=1}^d (B_t^l + x_tilde)^2, B_t^l ~ N(0, t).
SampleSet oracle_chi_square_1d(int d, double x_tilde, double t, std::size_t n_samples,
                               std::uint64_t seed, int threads = 0);

/// Multiplicity (k1, k2) = ((p - N + 1) d / 2, d / 2) attached to the ordered
/// square-rooted spectrum of a p x N Wishart process over R, C or H.
std::array<double, 2> wishart_multiplicity(int p, int n, int d_field);

/// Draws of the descending square-rooted eigenvalues of (A0 + B_t)^* (A0 + B_t),
/// with A0 the p x N rectangular diagonal embedding of x0 and B_t a p x N
/// matrix over R (d=1), C (d=2) or H (d=4) with N(0, t) real components.
SampleSet oracle_wishart(int p, const RootSystemSpec& spec, int d_field,
                         std::span<const double> x0, double t, std::size_t n_samples,
                         std::uint64_t seed, int threads = 0);

// -- hypothesis tests ------------------------------------------------------

/// Asymptotic Kolmogorov constant at the 1% level.
inline constexpr double kKsC001 = 1.628;

struct KsResult {
  double statistic = 0.0;
  double critical_1pct = 0.0;
  bool passes() const { return statistic < critical_1pct; }
};

KsResult ks_two_sample(const SampleSet& a, const SampleSet& b, std::size_t coord);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

KsResult ks_one_sample_normal(const SampleSet& a, const NormalPrediction& pred, std::size_t coord);
KsResult ks_one_sample_normal(std::span<const double> a, double mean, double variance);

double normal_cdf(double x, double mean, double variance);

// -- figure experiment -------------------------------------------------------

struct Histogram {
  static constexpr double kWidth = 0.25;
  static constexpr double kLow = -6.0;
  static constexpr double kHigh = 6.0;
  static constexpr std::size_t kBins = 48;

  std::array<std::size_t, kBins> counts{};
  std::size_t underflow = 0;
  std::size_t overflow = 0;

  void add(double v);
  static double center(std::size_t bin) { return kLow + (bin + 0.5) * kWidth; }
};

struct Figure1Panel {
  double t = 0.0;
  double k1 = 0.0;
  std::size_t coordinate = 0;  ///< 0-based
  double mean = 0.0;           ///< empirical mean of X_t^i - sqrt(k1) sqrt(2t + x_i^2)
  double variance = 0.0;
  double predicted_variance = 0.0;
  Histogram histogram;
  std::size_t n_paths = 0;
  std::size_t exited = 0;
};

struct Figure1Options {
  std::size_t n_paths = 2000;
  double dt = 1e-3;
  double k2 = 1.0;
  Vec x = {3.0, 2.0, 1.0};
  std::vector<double> k1_values = {5.0, 50.0, 500.0};
  std::vector<double> times = {1.0, 10.0};
  int threads = 0;
};

struct Figure1Report {
  Figure1Options options;
  std::uint64_t seed = 0;
  std::vector<Figure1Panel> panels;  ///< ordered by (t, coordinate, k1)

  const Figure1Panel& panel(double t, double k1, std::size_t coordinate) const;
};

/// Simulates type-B paths from sqrt(k1) x with k2 fixed for each k1 (the same
/// seed for every k1) and summarizes the CLT-centered coordinates at each time.
Figure1Report figure1_experiment(std::uint64_t seed, const Figure1Options& options = {});

// -- experiments -------------------------------------------------------------

struct LlnOptions {
  FreezingRegime regime = FreezingRegime::a();
  ChamberPoint x;
  Vec y;  ///< empty means 0
  std::vector<double> kappas = {25.0, 100.0, 400.0};
  std::size_t n_paths = 100;
  double t = 1.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct LlnLevel {
  double kappa = 0.0;
  double median_scaled = 0.0;  ///< median over paths of sup |X/sqrt(kappa) - phi|
  double q10_scaled = 0.0;
  double q90_scaled = 0.0;
  double median_absolute = 0.0;  ///< median of sup |X - sqrt(kappa) phi|
  std::size_t exited = 0;
};

struct LlnReport {
  std::vector<LlnLevel> levels;
  /// Least-squares slope of log(median_scaled) against log(kappa); absent
  /// with fewer than two kappas.
  std::optional<double> slope;
};

/// Raw paths from sqrt(kappa) x + y for each kappa, compared with phi(s, x).
LlnReport lln_rate_experiment(const LlnOptions& options);

double quantile(Vec values, double q);

struct CltOptions {
  Vec x = {3.0, 2.0, 1.0};
  double k1 = 500.0;
  double k2 = 1.0;
  double t = 1.0;
  std::size_t n_paths = 2000;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct CltCoordinate {
  double mean = 0.0;
  double variance = 0.0;
  double predicted_variance = 0.0;
  double variance_ratio = 0.0;  ///< empirical / predicted
  KsResult ks_demeaned;         ///< after subtracting the empirical mean
  KsResult ks_raw;
};

struct CltReport {
  CltOptions options;
  Vec centering;
  NormalPrediction prediction;
  std::vector<CltCoordinate> coordinates;
  SampleSet centered;  ///< X_t - centering, one row per path
  std::size_t exited = 0;
};

/// Type-B paths from sqrt(k1) x with k2 fixed, centered as in the B CLT.
CltReport clt_b2_experiment(const CltOptions& options);

struct OracleComparison {
  SampleSet oracle;
  SampleSet sde;
  std::vector<KsResult> ks;  ///< per coordinate
  Multiplicity mult;
  std::size_t exited = 0;
};

/// Wishart spectra against type-B SDE paths from x0. The SDE multiplicity is
/// wishart_multiplicity(p, N, d) unless `mult` is given.
OracleComparison compare_wishart_to_sde(int p, int n, int d_field, std::span<const double> x0,
                                        double t, std::size_t n_samples, std::uint64_t seed,
                                        std::optional<Multiplicity> mult = std::nullopt,
                                        double dt = 1e-3, int threads = 0);

/// Sums of d squared shifted Brownian motions against the square of a B_1
/// SDE path with k1 = (d-1)/2 started at sqrt(d) x_tilde.
OracleComparison compare_chisq_to_sde(int d, double x_tilde, double t, std::size_t n_samples,
                                      std::uint64_t seed, double dt = 1e-3, int threads = 0);

}  // namespace bessel
