#include "bessel/validate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "bessel/bessel_sde.hpp"
#include "bessel/ensemble.hpp"
#include "bessel/error.hpp"
#include "bessel/noise.hpp"

namespace bessel {

Vec SampleSet::column(std::size_t coord) const {
  Vec out(size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = at(s, coord);
  return out;
}

Moments sample_moments(std::span<const double> values) {
  Moments m;
  const double n = static_cast<double>(values.size());
  if (values.size() < 2) return m;
  for (double v : values) m.mean += v;
  m.mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m.variance = m2 / (n - 1.0);
  m2 /= n;
  m4 /= n;
  m.std_error_mean = std::sqrt(m.variance / n);
  m.std_error_variance = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
  return m;
}

// -- predictions ------------------------------------------------------------

namespace {

void require_b_interior(std::span<const double> x) {
  if (!is_interior(RootSystemSpec{RootKind::B, static_cast<int>(x.size())}, x)) {
    throw Error(ErrorCode::BoundaryPoint, "x must lie in the open B chamber");
  }
}

void require_time(double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::ConfigInvalid, "t must be positive");
}

double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

NormalPrediction clt_b2_prediction(std::span<const double> x, double t) {
  require_b_interior(x);
  require_time(t);
  NormalPrediction p{Vec(x.size(), 0.0), Vec(x.size())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x2 = x[i] * x[i];
    p.variance_diag[i] = (t * t + t * x2) / (2.0 * t + x2);
  }
  return p;
}

Vec clt_b2_centering(std::span<const double> x, double t, double k1) {
  Vec c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = std::sqrt(k1) * std::sqrt(2.0 * t + x[i] * x[i]);
  return c;
}

NormalPrediction clt_squared_prediction(std::span<const double> x, double t) {
  require_b_interior(x);
  require_time(t);
  NormalPrediction p{Vec(x.size(), 0.0), Vec(x.size())};
  for (std::size_t i = 0; i < x.size(); ++i) p.variance_diag[i] = 4.0 * t * t + 4.0 * t * x[i] * x[i];
  return p;
}

NormalPrediction norm_clt_prediction(std::span<const double> x, double t, double gamma) {
  require_time(t);
  if (!(gamma > 0.0)) throw Error(ErrorCode::ConfigInvalid, "gamma must be positive");
  const double r2 = squared_norm(x);
  return NormalPrediction{{0.0}, {(t * t + t * r2) / (2.0 * t + r2)}};
}

double norm_clt_centering(std::span<const double> x, double t, double gamma) {
  const double n = static_cast<double>(x.size());
  return std::sqrt(gamma + (n - 1.0) / 2.0) * std::sqrt(2.0 * t + squared_norm(x));
}

// -- oracles ----------------------------------------------------------------

SampleSet oracle_chi_square_1d(int d, double x_tilde, double t, std::size_t n_samples,
                               std::uint64_t seed, int threads) {
  if (d < 1) throw Error(ErrorCode::ConfigInvalid, "d must be a positive integer");
  if (!(x_tilde >= 0.0)) throw Error(ErrorCode::ConfigInvalid, "x_tilde must be >= 0");
  require_time(t);
  SampleSet out{1, Vec(n_samples), "chisq1d", seed};
  const double sd = std::sqrt(t);
  parallel_for_index(n_samples, threads, [&](std::size_t s) {
    NormalStream normal(path_seed(seed, s));
    double sum = 0.0;
    for (int l = 0; l < d; ++l) {
      const double b = sd * normal() + x_tilde;
      sum += b * b;
    }
    out.draws[s] = sum;
  });
  return out;
}

std::array<double, 2> wishart_multiplicity(int p, int n, int d_field) {
  return {(p - n + 1) * d_field / 2.0, d_field / 2.0};
}

SampleSet oracle_wishart(int p, const RootSystemSpec& spec, int d_field,
                         std::span<const double> x0, double t, std::size_t n_samples,
                         std::uint64_t seed, int threads) {
  if (spec.kind != RootKind::B) {
    throw Error(ErrorCode::ConfigInvalid, "Wishart oracle targets type B");
  }
  const int n = spec.n;
  if (p < n) throw Error(ErrorCode::ShapeError, "shape parameter p must be >= N");
  if (d_field != 1 && d_field != 2 && d_field != 4) {
    throw Error(ErrorCode::ConfigInvalid, "field dimension must be 1, 2 or 4");
  }
  if (static_cast<int>(x0.size()) != n || !in_closed_chamber(spec, x0)) {
    throw Error(ErrorCode::ConfigInvalid, "x0 must be a point of the closed B chamber");
  }
  require_time(t);

  using Complex = std::complex<double>;
  SampleSet out{static_cast<std::size_t>(n), Vec(n_samples * static_cast<std::size_t>(n)),
                "wishart_d" + std::to_string(d_field), seed};
  const double sd = std::sqrt(t);
  // Quaternions act as 2x2 complex blocks [[a + bi, c + di], [-c + di, a - bi]].
  const int block = d_field == 4 ? 2 : 1;

  parallel_for_index(n_samples, threads, [&](std::size_t s) {
    NormalStream normal(path_seed(seed, s));
    Eigen::MatrixXcd m(p * block, n * block);
    for (int r = 0; r < p; ++r) {
      for (int c = 0; c < n; ++c) {
        const double shift = (r == c) ? x0[static_cast<std::size_t>(c)] : 0.0;
        const double a = shift + sd * normal();
        const double b = d_field >= 2 ? sd * normal() : 0.0;
        if (block == 1) {
          m(r, c) = Complex(a, b);
        } else {
          const double qc = sd * normal();
          const double qd = sd * normal();
          m(2 * r, 2 * c) = Complex(a, b);
          m(2 * r, 2 * c + 1) = Complex(qc, qd);
          m(2 * r + 1, 2 * c) = Complex(-qc, qd);
          m(2 * r + 1, 2 * c + 1) = Complex(a, -b);
        }
      }
    }
    const Eigen::MatrixXcd gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    Vec ev(solver.eigenvalues().data(), solver.eigenvalues().data() + n * block);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    for (int i = 0; i < n; ++i) {
      // Quaternionic spectra come in equal pairs.
      out.draws[s * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
          std::sqrt(std::max(ev[static_cast<std::size_t>(i * block)], 0.0));
    }
  });
  return out;
}

// -- hypothesis tests ------------------------------------------------------

double normal_cdf(double x, double mean, double variance) {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::ConfigInvalid, "KS needs non-empty samples");
  Vec sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double m = static_cast<double>(sa.size());
  const double n = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
  }
  return {d, kKsC001 * std::sqrt((m + n) / (m * n))};
}

KsResult ks_two_sample(const SampleSet& a, const SampleSet& b, std::size_t coord) {
  const Vec ca = a.column(coord);
  const Vec cb = b.column(coord);
  return ks_two_sample(ca, cb);
}

KsResult ks_one_sample_normal(std::span<const double> a, double mean, double variance) {
  if (a.empty()) throw Error(ErrorCode::ConfigInvalid, "KS needs a non-empty sample");
  Vec s(a.begin(), a.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = normal_cdf(s[i], mean, variance);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kKsC001 / std::sqrt(n)};
}

KsResult ks_one_sample_normal(const SampleSet& a, const NormalPrediction& pred, std::size_t coord) {
  const Vec c = a.column(coord);
  return ks_one_sample_normal(c, pred.mean[coord], pred.variance_diag[coord]);
}

// -- figure experiment -------------------------------------------------------

void Histogram::add(double v) {
  if (v < kLow) {
    ++underflow;
  } else if (v >= kHigh) {
    ++overflow;
  } else {
    counts[std::min(kBins - 1, static_cast<std::size_t>((v - kLow) / kWidth))]++;
  }
}

const Figure1Panel& Figure1Report::panel(double t, double k1, std::size_t coordinate) const {
  for (const auto& p : panels) {
    if (p.t == t && p.k1 == k1 && p.coordinate == coordinate) return p;
  }
  throw Error(ErrorCode::ConfigInvalid, "no such Figure 1 panel");
}

Figure1Report figure1_experiment(std::uint64_t seed, const Figure1Options& options) {
  if (options.times.empty() || options.k1_values.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "figure needs times and k1 values");
  }
  const double t_max = *std::max_element(options.times.begin(), options.times.end());
  const double t_min = *std::min_element(options.times.begin(), options.times.end());
  const auto stride = static_cast<std::size_t>(std::llround(t_min / options.dt));
  for (double t : options.times) {
    const double ratio = t / (static_cast<double>(stride) * options.dt);
    if (stride == 0 || std::abs(ratio - std::round(ratio)) > 1e-9) {
      throw Error(ErrorCode::ConfigInvalid, "figure times must be multiples of the smallest time");
    }
  }

  const std::size_t n = options.x.size();
  const RootSystemSpec spec{RootKind::B, static_cast<int>(n)};
  Figure1Report report{options, seed, {}};

  for (double k1 : options.k1_values) {
    SimConfig cfg;
    cfg.spec = spec;
    cfg.mult = Multiplicity::b(k1, options.k2);
    cfg.regime = FreezingRegime::b_k1(options.k2);
    cfg.start = options.x;
    for (auto& v : cfg.start) v *= std::sqrt(k1);
    cfg.horizon = t_max;
    cfg.dt = options.dt;
    cfg.seed = seed;
    cfg.n_paths = options.n_paths;
    // The SDE never reaches the walls for k >= 1/2; the guard only backs the
    // reject-and-halve step control.
    cfg.guard_eps = 1e-6;
    cfg.record_stride = stride;
    const auto paths = simulate_ensemble(cfg, std::nullopt, options.threads);

    for (double t : options.times) {
      const Vec centering = clt_b2_centering(options.x, t, k1);
      const NormalPrediction pred = clt_b2_prediction(options.x, t);
      for (std::size_t c = 0; c < n; ++c) {
        Figure1Panel panel;
        panel.t = t;
        panel.k1 = k1;
        panel.coordinate = c;
        panel.predicted_variance = pred.variance_diag[c];
        Vec values;
        values.reserve(paths.size());
        for (const auto& path : paths) {
          if (path.exited) {
            ++panel.exited;
            continue;
          }
          const auto& times = path.trajectory.times;
          const auto it = std::find_if(times.begin(), times.end(),
                                       [&](double s) { return std::abs(s - t) < 1e-9; });
          const double v = path.trajectory.points[static_cast<std::size_t>(it - times.begin())][c] -
                           centering[c];
          values.push_back(v);
          panel.histogram.add(v);
        }
        const Moments m = sample_moments(values);
        panel.mean = m.mean;
        panel.variance = m.variance;
        panel.n_paths = values.size();
        report.panels.push_back(panel);
      }
    }
  }
  std::stable_sort(report.panels.begin(), report.panels.end(), [](const auto& a, const auto& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.coordinate < b.coordinate;
  });
  return report;
}

}  // namespace bessel

// -- experiments -------------------------------------------------------------

namespace bessel {

double quantile(Vec values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

LlnReport lln_rate_experiment(const LlnOptions& options) {
  options.regime.validate();
  const RootSystemSpec spec{options.regime.root_kind(), static_cast<int>(options.x.size())};
  if (!is_interior(spec, options.x)) {
    throw Error(ErrorCode::BoundaryPoint, "LLN base point x must be interior");
  }
  if (!options.y.empty() && options.y.size() != options.x.size()) {
    throw Error(ErrorCode::ConfigInvalid, "offset y has wrong dimension");
  }

  LlnReport report;
  for (double kappa : options.kappas) {
    SimConfig cfg;
    cfg.spec = spec;
    cfg.mult = options.regime.multiplicity(kappa);
    cfg.regime = options.regime;
    cfg.start = options.x;
    for (std::size_t i = 0; i < cfg.start.size(); ++i) {
      cfg.start[i] = std::sqrt(kappa) * options.x[i] + (options.y.empty() ? 0.0 : options.y[i]);
    }
    cfg.horizon = options.t;
    cfg.dt = options.dt;
    cfg.seed = options.seed;
    cfg.n_paths = options.n_paths;
    const auto paths = simulate_ensemble(cfg, std::nullopt, options.threads);

    Vec scaled(paths.size()), absolute(paths.size());
    LlnLevel level;
    level.kappa = kappa;
    parallel_for_index(paths.size(), options.threads, [&](std::size_t i) {
      const LlnError e = lln_error(paths[i], options.regime, spec, options.x, kappa);
      scaled[i] = e.scaled;
      absolute[i] = e.absolute;
    });
    for (const auto& p : paths) level.exited += p.exited ? 1 : 0;
    level.median_scaled = quantile(scaled, 0.5);
    level.q10_scaled = quantile(scaled, 0.1);
    level.q90_scaled = quantile(scaled, 0.9);
    level.median_absolute = quantile(absolute, 0.5);
    report.levels.push_back(level);
  }

  if (report.levels.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(report.levels.size());
    for (const auto& l : report.levels) {
      const double lx = std::log(l.kappa), ly = std::log(l.median_scaled);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    report.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return report;
}

CltReport clt_b2_experiment(const CltOptions& options) {
  const std::size_t n = options.x.size();
  CltReport report;
  report.options = options;
  report.centering = clt_b2_centering(options.x, options.t, options.k1);
  report.prediction = clt_b2_prediction(options.x, options.t);

  SimConfig cfg;
  cfg.spec = {RootKind::B, static_cast<int>(n)};
  cfg.mult = Multiplicity::b(options.k1, options.k2);
  cfg.regime = FreezingRegime::b_k1(options.k2);
  cfg.start = options.x;
  for (auto& v : cfg.start) v *= std::sqrt(options.k1);
  cfg.horizon = options.t;
  cfg.dt = options.dt;
  cfg.seed = options.seed;
  cfg.n_paths = options.n_paths;
  cfg.guard_eps = 1e-6;
  cfg.record_stride = cfg.n_steps();
  const auto paths = simulate_ensemble(cfg, std::nullopt, options.threads);

  report.centered = SampleSet{n, {}, "clt_b2_centered", options.seed};
  for (const auto& p : paths) {
    if (p.exited) {
      ++report.exited;
      continue;
    }
    const auto& last = p.trajectory.points.back();
    for (std::size_t c = 0; c < n; ++c) report.centered.draws.push_back(last[c] - report.centering[c]);
  }
  for (std::size_t c = 0; c < n; ++c) {
    const Vec col = report.centered.column(c);
    const Moments m = sample_moments(col);
    CltCoordinate coord;
    coord.mean = m.mean;
    coord.variance = m.variance;
    coord.predicted_variance = report.prediction.variance_diag[c];
    coord.variance_ratio = m.variance / coord.predicted_variance;
    coord.ks_raw = ks_one_sample_normal(col, 0.0, coord.predicted_variance);
    coord.ks_demeaned = ks_one_sample_normal(col, m.mean, coord.predicted_variance);
    report.coordinates.push_back(coord);
  }
  return report;
}

namespace {

SampleSet final_points(const std::vector<PathResult>& paths, std::size_t dim, std::string label,
                       std::uint64_t seed, std::size_t& exited) {
  SampleSet out{dim, {}, std::move(label), seed};
  for (const auto& p : paths) {
    if (p.exited) {
      ++exited;
      continue;
    }
    const auto& last = p.trajectory.points.back();
    out.draws.insert(out.draws.end(), last.begin(), last.end());
  }
  return out;
}

}  // namespace

OracleComparison compare_wishart_to_sde(int p, int n, int d_field, std::span<const double> x0,
                                        double t, std::size_t n_samples, std::uint64_t seed,
                                        std::optional<Multiplicity> mult, double dt,
                                        int threads) {
  const RootSystemSpec spec{RootKind::B, n};
  OracleComparison cmp;
  cmp.oracle = oracle_wishart(p, spec, d_field, x0, t, n_samples, seed, threads);
  if (mult) {
    cmp.mult = *mult;
  } else {
    const auto km = wishart_multiplicity(p, n, d_field);
    cmp.mult = Multiplicity::b(km[0], km[1]);
  }

  SimConfig cfg;
  cfg.spec = spec;
  cfg.mult = cmp.mult;
  cfg.start.assign(x0.begin(), x0.end());
  cfg.horizon = t;
  cfg.dt = dt;
  cfg.seed = splitmix64(seed);
  cfg.n_paths = n_samples;
  cfg.guard_eps = 1e-6;
  cfg.record_stride = cfg.n_steps();
  cmp.sde = final_points(simulate_ensemble(cfg, std::nullopt, threads), cfg.start.size(),
                         "sde_b", cfg.seed, cmp.exited);
  for (int c = 0; c < n; ++c) {
    cmp.ks.push_back(ks_two_sample(cmp.oracle, cmp.sde, static_cast<std::size_t>(c)));
  }
  return cmp;
}

OracleComparison compare_chisq_to_sde(int d, double x_tilde, double t, std::size_t n_samples,
                                      std::uint64_t seed, double dt, int threads) {
  OracleComparison cmp;
  cmp.oracle = oracle_chi_square_1d(d, x_tilde, t, n_samples, seed, threads);
  cmp.mult = Multiplicity::b((d - 1) / 2.0, 0.0);

  SimConfig cfg;
  cfg.spec = {RootKind::B, 1};
  cfg.mult = cmp.mult;
  cfg.start = {std::sqrt(static_cast<double>(d)) * x_tilde};
  cfg.horizon = t;
  cfg.dt = dt;
  cfg.seed = splitmix64(seed);
  cfg.n_paths = n_samples;
  cfg.guard_eps = 1e-6;
  cfg.record_stride = cfg.n_steps();
  cmp.sde = final_points(simulate_ensemble(cfg, std::nullopt, threads), 1, "sde_b1_squared",
                         cfg.seed, cmp.exited);
  for (auto& v : cmp.sde.draws) v *= v;
  cmp.ks.push_back(ks_two_sample(cmp.oracle, cmp.sde, 0));
  return cmp;
}

}  // namespace bessel
