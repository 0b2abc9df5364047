#include <cmath>
#include <limits>
#include <vector>

#include "condint/error.hpp"
#include "condint/estimation.hpp"
#include "condint/intervals.hpp"
#include "condint/model.hpp"
#include "condint/normal.hpp"
#include "doctest.h"

using namespace condint;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Contract;
}

void check_same_numbers(const IntervalResult& a, const IntervalResult& b) {
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK(a.center == b.center);
  CHECK(a.gamma1 == b.gamma1);
  CHECK(a.gamma2 == b.gamma2);
  CHECK(a.variance == b.variance);
  CHECK(a.quantile_low == b.quantile_low);
  CHECK(a.quantile_high == b.quantile_high);
  CHECK(a.rate == b.rate);
}

TimeSeries poisoned(const TimeSeries& x, const SplitPlan& plan) {
  std::vector<double> v(x.values().begin(), x.values().end());
  for (std::size_t t = plan.t_e + 1; t < plan.t_p; ++t) v[t - 1] = std::numeric_limits<double>::quiet_NaN();
  return TimeSeries::unchecked(v);
}

}  // namespace

TEST_CASE("default split plans") {
  const auto a = default_split_plan(1000);
  CHECK(a.gap == 47);
  CHECK(a.t_p == 953);
  CHECK(a.t_e == 906);
  CHECK(a.T == 1000);
  CHECK(a.l_t == doctest::Approx(std::log(1000.0)));
  const auto b = default_split_plan(200);
  CHECK(b.gap == 28);
  CHECK(b.t_p == 172);
  CHECK(b.t_e == 144);
  CHECK(code_of([] { default_split_plan(50); }) == ErrorCode::Precondition);
  const auto c = default_split_plan(1000, {SplitRule::Kind::Custom, 2.0});
  CHECK(c.gap == 13);
  CHECK(c.t_e == 1000 - 26);
}

TEST_CASE("split plan ordering") {
  CHECK_NOTHROW(make_split_plan(100, 50, 60));
  CHECK(code_of([] { make_split_plan(100, 60, 60); }) == ErrorCode::Contract);
  CHECK(code_of([] { make_split_plan(100, 70, 60); }) == ErrorCode::Contract);
  CHECK(code_of([] { make_split_plan(100, 1, 60); }) == ErrorCode::Contract);
  CHECK(code_of([] { make_split_plan(100, 50, 100); }) == ErrorCode::Contract);
  const auto x = simulate_ar1({0.5, 1.0}, 300, 1);
  const Ar1Model model;
  CHECK(code_of([&] { build_interval_spl(x, make_split_plan(200, 100, 150), model, Gammas::equal_tailed(0.1)); }) ==
        ErrorCode::Contract);
}

TEST_CASE("variant names") {
  for (Variant v : {Variant::TwoIP, Variant::SPL, Variant::STA}) CHECK(parse_variant(to_string(v)) == v);
  CHECK_THROWS_AS(parse_variant("bogus"), Error);
}

TEST_CASE("gammas validation") {
  CHECK_NOTHROW(Gammas::equal_tailed(0.1).validate());
  CHECK_THROWS_AS((Gammas{0.0, 0.1}.validate()), Error);
  CHECK_THROWS_AS((Gammas{0.6, 0.5}.validate()), Error);
}

TEST_CASE("delta variance") {
  Matrix cov(1, 1, 0.75);
  CHECK(delta_variance({2.0}, cov) == 3.0);
  CHECK(delta_variance({0.0}, cov) == kDeltaVarianceFloor);
  Matrix id(3, 3);
  for (int i = 0; i < 3; ++i) id(i, i) = 1.0;
  const auto pred = predict_garch11({0.1, 0.0, 0.8}, TimeSeries({1.0, 2.0}));
  CHECK(pred.gradient[0] == doctest::Approx(5.0));
  EstimationResult est{{0.1, 0.0, 0.8}, id, 1.0, 2, {}};
  double expected = 0.0;
  for (double g : pred.gradient) expected += g * g;
  CHECK(delta_variance(pred, est) == doctest::Approx(expected));
  CHECK(code_of([&] { delta_variance({1.0, 2.0}, cov); }) == ErrorCode::Contract);
}

TEST_CASE("normal interval example") {
  const auto r = normal_interval(1.0, 0.04, 20.0, {0.05, 0.05}, Variant::STA);
  CHECK(std::abs(r.lower - 0.983551) < 1e-6);
  CHECK(std::abs(r.upper - 1.016449) < 1e-6);
  CHECK(std::abs((r.upper - r.center) - (r.center - r.lower)) < 1e-10);
  const double w = std::sqrt(0.04) * (normal_quantile(0.95) - normal_quantile(0.05)) / 20.0;
  CHECK(r.width() == doctest::Approx(w).epsilon(1e-14));
  const auto z = normal_interval(1.0, kDeltaVarianceFloor, 20.0, {0.05, 0.05}, Variant::STA);
  CHECK(z.width() <= 2e-6 * normal_quantile(0.95) / 20.0);
  const auto asym = normal_interval(0.0, 1.0, 1.0, {0.01, 0.2}, Variant::STA);
  CHECK(asym.lower == doctest::Approx(-normal_quantile(0.8)));
  CHECK(asym.upper == doctest::Approx(-normal_quantile(0.01)));
}

TEST_CASE("quantile interval") {
  const auto fhat = plugin_cdf({2.0}, ghat_parametric_normal({{0.5}, Matrix(1, 1, 0.75), 10.0, 100, {}}));
  REQUIRE(std::holds_alternative<NormalPlugin>(fhat));
  const auto q = quantile_interval(1.0, fhat, 10.0, {0.05, 0.05}, Variant::STA);
  const auto n = normal_interval(1.0, 3.0, 10.0, {0.05, 0.05}, Variant::STA);
  check_same_numbers(q, n);

  const SamplePlugin two{StepCdf({-1.0, 1.0}, {0.5, 1.0}), 100};
  const auto t = quantile_interval(3.0, PluginCdf{two}, 10.0, {0.25, 0.25}, Variant::STA);
  CHECK(t.lower == doctest::Approx(2.9));
  CHECK(t.upper == doctest::Approx(3.1));
  const SamplePlugin few{StepCdf({-1.0, 1.0}, {0.5, 1.0}), 99};
  CHECK(code_of([&] { quantile_interval(3.0, PluginCdf{few}, 10.0, {0.25, 0.25}, Variant::STA); }) ==
        ErrorCode::Precondition);
}

TEST_CASE("bootstrap and normal plug-in intervals agree at large T") {
  const auto x = simulate_ar1({0.5, 1.0}, 8000, 77);
  const auto est = estimate_ar1_ols(x);
  const double center = est.theta[0] * x.last();
  const Gammas g = Gammas::equal_tailed(0.1);
  const auto normal = quantile_interval(center, plugin_cdf({x.last()}, ghat_parametric_normal(est)), est.rate, g,
                                        Variant::STA);
  const auto boot = quantile_interval(center, plugin_cdf({x.last()}, ghat_bootstrap_ar1(x, 999, 77)), est.rate, g,
                                      Variant::STA);
  CHECK(std::abs(normal.lower - boot.lower) < 0.1 * normal.width());
  CHECK(std::abs(normal.upper - boot.upper) < 0.1 * normal.width());
}

TEST_CASE("2ip with y equal to x reproduces sta") {
  const Gammas g = Gammas::equal_tailed(0.1);
  const Ar1Model ar1;
  const auto x = simulate_ar1({0.5, 1.0}, 500, 3);
  const auto a = build_interval_2ip(x, x, ar1, g);
  const auto b = build_interval_sta(x, ar1, g);
  CHECK(a.variant == Variant::TwoIP);
  CHECK(b.variant == Variant::STA);
  check_same_numbers(a, b);
  const Garch11Model garch;
  const auto y = simulate_garch11({0.1, 0.1, 0.8}, 800, 3).series;
  check_same_numbers(build_interval_2ip(y, y, garch, g), build_interval_sta(y, garch, g));
}

TEST_CASE("2ip with a zero terminal value collapses at zero") {
  std::vector<double> v(200);
  const auto y = simulate_ar1({0.5, 1.0}, 200, 4);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = y.values()[i];
  v.back() = 0.0;
  const auto r = build_interval_2ip(TimeSeries(v), y, Ar1Model(), Gammas::equal_tailed(0.1));
  CHECK(r.center == 0.0);
  CHECK(r.width() < 1e-6);
}

TEST_CASE("sta half width for ar1") {
  const auto x = simulate_ar1({0.5, 1.0}, 1000, 9);
  const auto r = build_interval_sta(x, Ar1Model(), Gammas::equal_tailed(0.1));
  const double b = estimate_ar1_ols(x).theta[0];
  CHECK(r.center == doctest::Approx(b * x.last()).epsilon(1e-15));
  const double half = normal_quantile(0.95) * std::abs(x.last()) * std::sqrt(1.0 - b * b) / std::sqrt(1000.0);
  CHECK(r.upper - r.center == doctest::Approx(half).epsilon(1e-12));
  CHECK(r.center - r.lower == doctest::Approx(half).epsilon(1e-12));
}

TEST_CASE("ar1 intervals scale with the series") {
  const auto x = simulate_ar1({0.5, 1.0}, 400, 10);
  const auto r = build_interval_sta(x, Ar1Model(), Gammas::equal_tailed(0.1));
  for (double k : {0.5, 3.0}) {
    const auto s = build_interval_sta(x.scaled(k), Ar1Model(), Gammas::equal_tailed(0.1));
    CHECK(s.center == doctest::Approx(k * r.center).epsilon(1e-12));
    CHECK(s.width() == doctest::Approx(k * r.width()).epsilon(1e-12));
  }
}

TEST_CASE("intervals nest in gamma") {
  const auto x = simulate_ar1({0.5, 1.0}, 400, 11);
  const auto wide = build_interval_sta(x, Ar1Model(), Gammas::equal_tailed(0.05));
  const auto narrow = build_interval_sta(x, Ar1Model(), Gammas::equal_tailed(0.1));
  CHECK(wide.lower < narrow.lower);
  CHECK(wide.upper > narrow.upper);
}

TEST_CASE("spl uses only the estimation and conditioning blocks") {
  const Gammas g = Gammas::equal_tailed(0.1);
  const auto x = simulate_ar1({0.5, 1.0}, 1000, 12);
  const auto plan = default_split_plan(1000);
  const auto clean = build_interval_spl(x, plan, Ar1Model(), g);
  CHECK(clean.center == doctest::Approx(estimate_ar1_ols(x.slice(1, plan.t_e)).theta[0] * x.last()).epsilon(1e-15));
  CHECK(clean.rate == doctest::Approx(std::sqrt(1000.0)));
  check_same_numbers(build_interval_spl(poisoned(x, plan), plan, Ar1Model(), g), clean);

  const auto y = simulate_garch11({0.1, 0.1, 0.8}, 600, 12).series;
  const auto gplan = default_split_plan(600);
  const Garch11Model garch;
  const auto gclean = build_interval_spl(y, gplan, garch, g);
  const auto gpois = build_interval_spl(poisoned(y, gplan), gplan, garch, g);
  check_same_numbers(gpois, gclean);
  CHECK(std::isfinite(gpois.center));
}

TEST_CASE("convolution interval with no parameter error") {
  const auto innov = chi_square1_minus_one_table(100000);
  const double s2 = 2.0;
  const auto r = prediction_interval_convolution(StepCdf::point_mass(0.0), innov, s2, Gammas::equal_tailed(0.1));
  CHECK(r.lower == doctest::Approx(s2 * 0.00393).epsilon(0.01));
  CHECK(r.upper == doctest::Approx(s2 * 3.8415).epsilon(0.01));
  CHECK(chi_square1_quantile(0.95) == doctest::Approx(3.841459).epsilon(1e-6));
}

TEST_CASE("parameter error widens the convolution interval") {
  const auto innov = chi_square1_minus_one_table(100000);
  const Gammas g = Gammas::equal_tailed(0.1);
  const auto base = prediction_interval_convolution(StepCdf::point_mass(0.0), innov, 1.0, g);
  for (double v : {0.01, 0.1, 1.0}) {
    const auto wide = prediction_interval_convolution(NormalPlugin{v}, innov, 1.0, g);
    CHECK(wide.width() >= base.width() * (1.0 - 1e-3));
  }
}

TEST_CASE("convolution gates") {
  const auto innov = chi_square1_minus_one_table(1000);
  const Gammas g = Gammas::equal_tailed(0.1);
  CHECK(code_of([&] { prediction_interval_convolution(StepCdf::point_mass(0.0), innov, 0.0, g); }) ==
        ErrorCode::InvalidParameter);
  CHECK(code_of([&] { prediction_interval_convolution(StepCdf::point_mass(0.0), innov, 1.0, g, 9999); }) ==
        ErrorCode::Precondition);
  const auto a = prediction_interval_convolution(NormalPlugin{0.2}, innov, 1.0, g, 20000, 3);
  const auto b = prediction_interval_convolution(NormalPlugin{0.2}, innov, 1.0, g, 20000, 3);
  CHECK(a == b);
}

TEST_CASE("innovation table from residuals") {
  const std::vector<double> e{-1.0, 1.0, -2.0, 0.5};
  const auto t = innovation_table_from_residuals(e);
  CHECK(t.support().front() == doctest::Approx(-0.75));
  CHECK(t.support().back() == doctest::Approx(3.0));
}
