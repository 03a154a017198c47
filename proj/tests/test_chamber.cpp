#include <doctest.h>

#include <cmath>
#include <random>

#include "bessel/chamber.hpp"
#include "bessel/error.hpp"
#include "test_support.hpp"

using namespace bessel;

namespace {

struct Case {
  RootSystemSpec spec;
  Multiplicity mult;
};

std::vector<Case> all_cases() {
  std::vector<Case> out;
  for (int n : {1, 2, 3, 5}) {
    out.push_back({{RootKind::A, n}, Multiplicity::a(1.7)});
    out.push_back({{RootKind::B, n}, Multiplicity::b(0.8, 2.3)});
    if (n >= 2) out.push_back({{RootKind::D, n}, Multiplicity::d(1.3)});
  }
  return out;
}

}  // namespace

TEST_CASE("log_weight matches hand-evaluated products") {
  CHECK(log_weight({RootKind::A, 2}, Multiplicity::a(1.0), Vec{1.0, -1.0}) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
  CHECK(log_weight({RootKind::B, 1}, Multiplicity::b(1.0, 7.0), Vec{1.0}) == 0.0);
  // D, N=2, k=1 at (3,1): 2 ln(9 - 1).
  CHECK(log_weight({RootKind::D, 2}, Multiplicity::d(1.0), Vec{3.0, 1.0}) ==
        doctest::Approx(2.0 * std::log(8.0)).epsilon(1e-14));
}

TEST_CASE("log_weight rejects boundary points") {
  CHECK_THROWS_AS(log_weight({RootKind::A, 2}, Multiplicity::a(1.0), Vec{1.0, 1.0}), Error);
  CHECK_THROWS_AS(log_weight({RootKind::B, 2}, Multiplicity::b(1.0, 1.0), Vec{1.0, 0.0}), Error);
  try {
    log_weight({RootKind::D, 2}, Multiplicity::d(1.0), Vec{1.0, 1.0});
    FAIL("expected BoundaryPoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryPoint);
  }
}

TEST_CASE("gamma per root system") {
  CHECK(Multiplicity::a(2.0).gamma({RootKind::A, 4}) == 12.0);
  CHECK(Multiplicity::b(3.0, 2.0).gamma({RootKind::B, 3}) == 2.0 * 6 + 3.0 * 3);
  CHECK(Multiplicity::d(2.0).gamma({RootKind::D, 3}) == 12.0);
}

TEST_CASE("drift examples") {
  const Vec a = drift({RootKind::A, 2}, Multiplicity::a(1.0), Vec{1.0, -1.0});
  CHECK(a[0] == doctest::Approx(0.5));
  CHECK(a[1] == doctest::Approx(-0.5));
  CHECK(drift({RootKind::B, 1}, Multiplicity::b(2.0, 0.0), Vec{4.0})[0] == doctest::Approx(0.5));

  const RootSystemSpec spec{RootKind::A, 3};
  const Vec x{2.0, 0.0, -1.0};
  const Vec mirrored{1.0, 0.0, -2.0};
  const Vec d = drift(spec, Multiplicity::a(1.4), x);
  const Vec dm = drift(spec, Multiplicity::a(1.4), mirrored);
  for (int i = 0; i < 3; ++i) CHECK(dm[i] == doctest::Approx(-d[2 - i]).epsilon(1e-14));

  CHECK_THROWS_AS(drift(spec, Multiplicity::a(1.0), Vec{1.0, 1.0, 0.0}), Error);
}

TEST_CASE("drift equals half the finite-difference gradient of log_weight") {
  std::mt19937_64 rng(11);
  for (const auto& c : all_cases()) {
    for (int rep = 0; rep < 10; ++rep) {
      const Vec x = test::random_interior(c.spec, rng);
      const Vec d = drift(c.spec, c.mult, x);
      const double h = 1e-6 * (1.0 + test::norm(x));
      for (std::size_t i = 0; i < x.size(); ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd =
            0.5 * (log_weight(c.spec, c.mult, xp) - log_weight(c.spec, c.mult, xm)) / (2.0 * h);
        CHECK(std::abs(fd - d[i]) <= 1e-6 * std::max(1.0, std::abs(d[i])));
      }
    }
  }
}

TEST_CASE("log_weight is homogeneous of degree 2 gamma and drift of degree -1") {
  std::mt19937_64 rng(12);
  for (const auto& c : all_cases()) {
    const Vec x = test::random_interior(c.spec, rng);
    const double gamma = c.mult.gamma(c.spec);
    for (double s : {0.5, 2.0, 7.0}) {
      const Vec sx = test::scaled(x, s);
      const double lhs = log_weight(c.spec, c.mult, sx) - log_weight(c.spec, c.mult, x);
      CHECK(lhs == doctest::Approx(2.0 * gamma * std::log(s)).epsilon(1e-10).scale(1.0));
      const Vec d = drift(c.spec, c.mult, x);
      const Vec ds = drift(c.spec, c.mult, sx);
      for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(ds[i] - d[i] / s) <= 1e-12 * std::max(1.0, std::abs(d[i] / s)));
      }
    }
  }
}

TEST_CASE("boundary_gap examples") {
  CHECK(boundary_gap({RootKind::A, 2}, Vec{1.0, -1.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(boundary_gap({RootKind::B, 2}, Vec{3.0, 1.0}, GapNotion::BScaledAxis, 2.0) ==
        doctest::Approx(0.5));
  CHECK(boundary_gap({RootKind::A, 2}, Vec{1.0, 1.0}) == 0.0);
  CHECK_THROWS_AS(boundary_gap({RootKind::B, 2}, Vec{3.0, 1.0}, GapNotion::BScaledAxis), Error);
  // B Euclidean: min of consecutive gaps / sqrt 2 and the last coordinate.
  CHECK(boundary_gap({RootKind::B, 2}, Vec{3.0, 2.5}) == doctest::Approx(0.5 / std::sqrt(2.0)));
  CHECK(boundary_gap({RootKind::B, 2}, Vec{3.0, 0.2}) == doctest::Approx(0.2));
  // D: distance to x_{N-1} = -x_N.
  CHECK(boundary_gap({RootKind::D, 2}, Vec{1.0, -0.8}) == doctest::Approx(0.2 / std::sqrt(2.0)));
}

TEST_CASE("boundary_gap is positive exactly on the interior") {
  std::mt19937_64 rng(13);
  for (const auto& c : all_cases()) {
    for (int rep = 0; rep < 20; ++rep) {
      Vec x = test::random_interior(c.spec, rng);
      CHECK(is_interior(c.spec, x));
      CHECK(boundary_gap(c.spec, x) > 0.0);
      if (c.spec.n >= 2) {
        x[1] = x[0];  // collide the first pair
        CHECK_FALSE(is_interior(c.spec, x));
        CHECK(boundary_gap(c.spec, x) == 0.0);
      }
    }
    if (c.spec.kind != RootKind::A) {
      Vec x = test::random_interior(c.spec, rng);
      x.back() = c.spec.kind == RootKind::B ? 0.0 : -x[x.size() - 2];
      CHECK_FALSE(is_interior(c.spec, x));
      CHECK(boundary_gap(c.spec, x) == 0.0);
    }
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS((RootSystemSpec{RootKind::A, 0}.validate()), Error);
  CHECK_THROWS_AS((RootSystemSpec{RootKind::D, 1}.validate()), Error);
  CHECK_NOTHROW((RootSystemSpec{RootKind::B, 1}.validate()));
  CHECK(parse_root_kind("D") == RootKind::D);
  CHECK_THROWS_AS(parse_root_kind("E"), Error);
}
