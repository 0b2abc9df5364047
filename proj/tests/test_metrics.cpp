#include <cmath>
#include <random>
#include <vector>

#include "condint/error.hpp"
#include "condint/metrics.hpp"
#include "condint/normal.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace condint;

namespace {

StepCdf empirical(std::vector<double> v) { return StepCdf::from_samples(v); }

}  // namespace

TEST_CASE("from_samples examples") {
  const auto a = empirical({0, 0, 1});
  CHECK(a.support() == std::vector<double>{0, 1});
  CHECK(a.cum()[0] == doctest::Approx(2.0 / 3.0));
  CHECK(a.cum()[1] == 1.0);
  const auto b = empirical({5});
  CHECK(b.support() == std::vector<double>{5});
  CHECK(b.cum() == std::vector<double>{1.0});
  const auto c = empirical({3, 1, 2});
  CHECK(c.support() == std::vector<double>{1, 2, 3});
  CHECK(c.cum()[0] == doctest::Approx(1.0 / 3.0));
  CHECK(c.cum()[1] == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(StepCdf::from_samples(std::vector<double>{}), Error);
}

TEST_CASE("step cdf validation") {
  CHECK_THROWS_AS(StepCdf({1.0, 1.0}, {0.5, 1.0}), Error);
  CHECK_THROWS_AS(StepCdf({1.0, 2.0}, {0.5, 0.9}), Error);
  CHECK_THROWS_AS(StepCdf({1.0, 2.0}, {0.7, 0.5}), Error);
  CHECK_THROWS_AS(StepCdf({}, {}), Error);
}

TEST_CASE("evaluation examples") {
  const auto d0 = StepCdf::point_mass(0.0);
  CHECK(eval(d0, -0.1) == 0.0);
  CHECK(eval(d0, 0.0) == 1.0);
  CHECK(d0.eval_left(0.0) == 0.0);
  const auto e = empirical({1, 2, 3});
  CHECK(eval(e, 2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(eval(e, 2.999) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("generalized inverse examples") {
  const auto d0 = StepCdf::point_mass(0.0);
  for (double u : {1e-9, 0.3, 1.0}) CHECK(generalized_inverse(d0, u) == 0.0);
  const auto e = empirical({1, 2, 3});
  CHECK(generalized_inverse(e, 0.5) == 2.0);
  CHECK(generalized_inverse(e, 1.0 / 3.0) == 1.0);
  CHECK_THROWS_AS(generalized_inverse(e, 0.0), Error);
  CHECK_THROWS_AS(generalized_inverse(e, 1.5), Error);
}

TEST_CASE("kolmogorov examples") {
  const auto e = empirical({1, 2, 3});
  CHECK(d_kolmogorov(e, e) == 0.0);
  CHECK(d_kolmogorov(StepCdf::point_mass(0), StepCdf::point_mass(1)) == 1.0);
  CHECK(d_kolmogorov(empirical({0, 1}), empirical({0, 2})) == doctest::Approx(0.5));
  const auto p = StepCdf::point_mass(0.0);
  CHECK(d_kolmogorov(p, [](double t) { return normal_cdf(t); }) == doctest::Approx(0.5));
}

TEST_CASE("levy examples") {
  const auto e = empirical({1, 2, 3});
  CHECK(d_levy(e, e) == 0.0);
  CHECK(std::abs(d_levy(StepCdf::point_mass(0), StepCdf::point_mass(0.3)) - 0.3) <= 1e-9);
  CHECK(std::abs(d_levy(StepCdf::point_mass(0), StepCdf::point_mass(5)) - 1.0) <= 1e-9);
}

TEST_CASE("bounded lipschitz examples") {
  const auto e = empirical({1, 2, 3});
  CHECK(d_bounded_lipschitz(e, e) == 0.0);
  CHECK(std::abs(d_bounded_lipschitz(StepCdf::point_mass(0), StepCdf::point_mass(1)) - 2.0 / 3.0) <= 1e-8);
  for (double d : {0.1, 0.5, 2.0, 10.0, 1000.0}) {
    const double v = d_bounded_lipschitz(StepCdf::point_mass(0), StepCdf::point_mass(d));
    CHECK(std::abs(v - 2.0 * d / (2.0 + d)) <= 1e-8);
    CHECK(v <= 2.0);
  }
  CHECK(d_bounded_lipschitz(StepCdf::point_mass(0), StepCdf::point_mass(1e6)) > 1.9999);
  CHECK_THROWS_AS(bounded_lipschitz_fixed_budget(e, e, 1.5), Error);
}

TEST_CASE("bounded lipschitz matches the full linear program") {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 60; ++i) {
    const auto f = oracle::random_step_cdf(gen, 6);
    const auto g = oracle::random_step_cdf(gen, 6);
    const double lp = oracle::bounded_lipschitz_lp(f, g);
    CHECK(std::abs(d_bounded_lipschitz(f, g) - lp) <= 1e-8);
  }
}

TEST_CASE("bounded lipschitz dominates feasible test functions") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const auto f = oracle::random_step_cdf(gen, 8);
    const auto g = oracle::random_step_cdf(gen, 8);
    const double d = d_bounded_lipschitz(f, g);
    const double L = unit(gen);
    const double c = 6.0 * unit(gen) - 3.0;
    const double ramp = oracle::integrate(f, g, [&](double z) { return std::clamp(L * (z - c), L - 1.0, 1.0 - L); });
    CHECK(d >= std::abs(ramp) - 1e-12);
    const double b = 5.0 * unit(gen);
    const double a = 1.0 / (1.0 + b);
    const double wave = oracle::integrate(f, g, [&](double z) { return a * std::sin(b * z + c); });
    CHECK(d >= std::abs(wave) - 1e-12);
  }
}

TEST_CASE("levy matches the grid oracle") {
  std::mt19937_64 gen(13);
  const double unit = 0.01;
  for (int i = 0; i < 60; ++i) {
    const auto a = oracle::random_lattice(gen, 5, 40);
    const auto b = oracle::random_lattice(gen, 5, 40);
    const auto [lo, hi] = oracle::levy_grid(a, b, unit);
    const double d = d_levy(oracle::to_step(a, unit), oracle::to_step(b, unit));
    CHECK(d >= lo - 1e-9);
    CHECK(d <= hi + 1e-9);
  }
}

TEST_CASE("metric properties on random pairs") {
  std::mt19937_64 gen(2024);
  for (int i = 0; i < 200; ++i) {
    const auto f = oracle::random_step_cdf(gen, 10);
    const auto g = oracle::random_step_cdf(gen, 10);
    const auto h = oracle::random_step_cdf(gen, 10);
    const double dk = d_kolmogorov(f, g);
    const double dl = d_levy(f, g);
    const double dbl = d_bounded_lipschitz(f, g);

    CHECK(dk == d_kolmogorov(g, f));
    CHECK(dl == d_levy(g, f));
    CHECK(dbl == d_bounded_lipschitz(g, f));
    CHECK(d_kolmogorov(f, f) == 0.0);
    CHECK(d_levy(f, f) == 0.0);
    CHECK(d_bounded_lipschitz(f, f) == 0.0);

    CHECK(dk <= d_kolmogorov(f, h) + d_kolmogorov(h, g) + 1e-9);
    CHECK(dl <= d_levy(f, h) + d_levy(h, g) + 1e-9);
    CHECK(dbl <= d_bounded_lipschitz(f, h) + d_bounded_lipschitz(h, g) + 1e-9);

    CHECK(dk >= 0.0);
    CHECK(dk <= 1.0);
    CHECK(dbl <= 2.0);
    CHECK(dl <= dk + 1e-9);
    CHECK(dl <= 2.0 * std::sqrt(dbl) + 1e-9);

    const double eps = dk + 1e-9;
    for (int k = 1; k < 100; ++k) {
      const double u = eps + (1.0 - 2.0 * eps) * k / 100.0;
      if (u <= eps || u >= 1.0 - eps) continue;
      const double gu = g.inverse(u);
      CHECK(f.inverse(u - eps) - eps <= gu);
      CHECK(gu <= f.inverse(u + eps) + eps);
    }
  }
}
