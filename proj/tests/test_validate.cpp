#include <doctest.h>

#include <cmath>
#include <random>

#include "bessel/error.hpp"
#include "bessel/validate.hpp"

using namespace bessel;

TEST_CASE("CLT prediction plug-ins") {
  const NormalPrediction p = clt_b2_prediction(Vec{3.0, 2.0, 1.0}, 1.0);
  CHECK(p.variance_diag[0] == doctest::Approx(10.0 / 11));
  CHECK(p.variance_diag[1] == doctest::Approx(5.0 / 6));
  CHECK(p.variance_diag[2] == doctest::Approx(2.0 / 3));
  CHECK(p.mean == Vec{0.0, 0.0, 0.0});
  CHECK(clt_b2_prediction(Vec{3.0}, 10.0).variance_diag[0] == doctest::Approx(190.0 / 29));
  CHECK(clt_b2_prediction(Vec{1e-9}, 2.0).variance_diag[0] == doctest::Approx(1.0));
  CHECK(clt_squared_prediction(Vec{3.0}, 1.0).variance_diag[0] == doctest::Approx(40.0));
  CHECK_THROWS_AS(clt_b2_prediction(Vec{1.0, 2.0}, 1.0), Error);

  const Vec c = clt_b2_centering(Vec{3.0, 1.0}, 1.0, 4.0);
  CHECK(c[0] == doctest::Approx(2.0 * std::sqrt(11.0)));
  CHECK(c[1] == doctest::Approx(2.0 * std::sqrt(3.0)));
}

TEST_CASE("delta-method link between the two CLT forms") {
  const Vec x{4.0, 2.5, 0.7};
  for (double t : {0.3, 1.0, 10.0}) {
    const auto lin = clt_b2_prediction(x, t);
    const auto sq = clt_squared_prediction(x, t);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double link = sq.variance_diag[i] / (4.0 * (2.0 * t + x[i] * x[i]));
      CHECK(std::abs(lin.variance_diag[i] - link) <= 1e-12 * lin.variance_diag[i]);
    }
  }
}

TEST_CASE("norm CLT prediction") {
  CHECK(norm_clt_prediction(Vec{3.0, 2.0, 1.0}, 1.0, 5.0).variance_diag[0] ==
        doctest::Approx(15.0 / 16));
  CHECK(norm_clt_prediction(Vec{0.0, 0.0}, 3.0, 5.0).variance_diag[0] == doctest::Approx(1.5));
  for (double x : {0.5, 2.0}) {
    const double v1 = norm_clt_prediction(Vec{x}, 1.3, 2.0).variance_diag[0];
    const double v2 = clt_b2_prediction(Vec{x}, 1.3).variance_diag[0];
    CHECK(std::abs(v1 - v2) <= 1e-12);
  }
  // Centering sqrt(gamma + (N-1)/2) sqrt(2t + |x|^2).
  CHECK(norm_clt_centering(Vec{3.0, 2.0, 1.0}, 1.0, 600.0) ==
        doctest::Approx(std::sqrt(601.0) * 4.0));
}

TEST_CASE("chi-square oracle moments") {
  {
    const SampleSet s = oracle_chi_square_1d(1, 0.0, 1.0, 10000, 1);
    const Moments m = sample_moments(s.draws);
    CHECK(std::abs(m.mean - 1.0) <= 3.0 * m.std_error_mean);
  }
  {
    const SampleSet s = oracle_chi_square_1d(5, 1.0, 2.0, 10000, 2);
    const Moments m = sample_moments(s.draws);
    CHECK(std::abs(m.mean - 15.0) <= 3.0 * m.std_error_mean);
    CHECK(std::abs(m.variance - 80.0) <= 3.0 * m.std_error_variance);
  }
}

TEST_CASE("Wishart multiplicity map") {
  const auto m = wishart_multiplicity(11, 2, 1);
  CHECK(m[0] == 5.0);
  CHECK(m[1] == 0.5);
  const auto c = wishart_multiplicity(6, 2, 2);
  CHECK(c[0] == 5.0);
  CHECK(c[1] == 1.0);
}

TEST_CASE("Wishart oracle reduces to chi distributions for N = 1") {
  // sqrt(t chi^2_{d p}) with mean sqrt(2t) Gamma((dp+1)/2) / Gamma(dp/2).
  const RootSystemSpec one{RootKind::B, 1};
  for (int d : {1, 2, 4}) {
    const int p = 3;
    const double t = 1.7;
    const SampleSet s = oracle_wishart(p, one, d, Vec{0.0}, t, 10000, 10 + d);
    const Moments m = sample_moments(s.draws);
    const double dof = d * p;
    const double mean = std::sqrt(2.0 * t) * std::exp(std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2));
    CAPTURE(d);
    CHECK(std::abs(m.mean - mean) <= 3.0 * m.std_error_mean);
  }
}

TEST_CASE("Wishart spectra: ordering and Frobenius mean") {
  // sum sigma_i^2 = |A0 + B|_F^2, whose mean is |x0|^2 + p N d t.
  const RootSystemSpec spec{RootKind::B, 2};
  for (int d : {1, 2, 4}) {
    const SampleSet s = oracle_wishart(7, spec, d, Vec{2.0, 1.0}, 1.0, 10000, 20 + d);
    Vec frob;
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s.at(i, 0) >= s.at(i, 1));
      CHECK(s.at(i, 1) >= 0.0);
      frob.push_back(s.at(i, 0) * s.at(i, 0) + s.at(i, 1) * s.at(i, 1));
    }
    const Moments m = sample_moments(frob);
    CAPTURE(d);
    CHECK(std::abs(m.mean - (5.0 + 7 * 2 * d)) <= 3.0 * m.std_error_mean);
  }
  CHECK_THROWS_AS(oracle_wishart(1, spec, 1, Vec{2.0, 1.0}, 1.0, 10, 1), Error);
}

TEST_CASE("two-sample KS basics") {
  const Vec a{1.0, 2.0, 3.0, 4.0};
  CHECK(ks_two_sample(a, a).statistic == 0.0);
  CHECK(ks_two_sample(a, Vec{10.0, 11.0}).statistic == 1.0);
  const KsResult r = ks_two_sample(Vec(2000, 0.0), Vec(2000, 0.0));
  CHECK(r.critical_1pct == doctest::Approx(1.628 * std::sqrt(4000.0 / (2000.0 * 2000.0))));
}

TEST_CASE("two-sample KS null calibration") {
  std::size_t passes = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const SampleSet a = oracle_chi_square_1d(3, 1.0, 1.0, 2000, 1000 + 2 * rep);
    const SampleSet b = oracle_chi_square_1d(3, 1.0, 1.0, 2000, 1001 + 2 * rep);
    passes += ks_two_sample(a, b, 0).passes() ? 1 : 0;
  }
  CHECK(passes >= 95);
}

TEST_CASE("one-sample normal KS") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(1.5, 2.0);
  Vec draws(2000);
  for (double& v : draws) v = normal(rng);
  const KsResult ok = ks_one_sample_normal(draws, 1.5, 4.0);
  CHECK(ok.passes());
  CHECK(ok.critical_1pct == doctest::Approx(1.628 / std::sqrt(2000.0)));
  CHECK_FALSE(ks_one_sample_normal(draws, 2.5, 4.0).passes());
  const KsResult single = ks_one_sample_normal(Vec{0.0}, 0.0, 1.0);
  CHECK(single.statistic >= 0.0);
  CHECK(single.statistic <= 1.0);
}

TEST_CASE("histogram binning") {
  Histogram h;
  h.add(-6.0);
  h.add(5.99);
  h.add(6.0);
  h.add(-6.01);
  h.add(0.1);
  CHECK(h.counts[0] == 1);
  CHECK(h.counts[47] == 1);
  CHECK(h.counts[24] == 1);
  CHECK(h.overflow == 1);
  CHECK(h.underflow == 1);
  CHECK(Histogram::center(0) == doctest::Approx(-5.875));
}

TEST_CASE("quantile interpolates order statistics") {
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(quantile({1.0, 2.0}, 0.25) == doctest::Approx(1.25));
  CHECK(std::isnan(quantile({}, 0.5)));
}

TEST_CASE("figure experiment report layout") {
  Figure1Options o;
  o.n_paths = 40;
  o.k1_values = {5.0, 50.0};
  const Figure1Report r = figure1_experiment(3, o);
  CHECK(r.panels.size() == 2 * 3 * 2);
  const Figure1Panel& p = r.panel(10.0, 50.0, 2);
  CHECK(p.predicted_variance == doctest::Approx(clt_b2_prediction(o.x, 10.0).variance_diag[2]));
  std::size_t total = p.histogram.underflow + p.histogram.overflow;
  for (auto c : p.histogram.counts) total += c;
  CHECK(total == p.n_paths);
  CHECK_THROWS_AS(r.panel(2.0, 50.0, 0), Error);
}
