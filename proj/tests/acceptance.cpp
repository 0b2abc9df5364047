// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "condint/intervals.hpp"
#include "condint/metrics.hpp"
#include "condint/models.hpp"
#include "condint/montecarlo.hpp"
#include "condint/report.hpp"
#include "oracles.hpp"

using namespace condint;

namespace {

constexpr std::uint64_t kSeed = 42;

int failures = 0;

void verdict(int id, bool ok, const std::string& detail, double seconds) {
  std::printf("criterion %d: %s  %s  [%.1fs]\n", id, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ExperimentConfig ar1(std::vector<std::size_t> T, std::size_t reps) {
  ExperimentConfig c;
  c.model = ModelKind::Ar1;
  c.theta = {0.5};
  c.noise_sd = 1.0;
  c.T = std::move(T);
  c.reps = reps;
  c.gammas = Gammas::equal_tailed(0.1);
  c.seed = kSeed;
  return c;
}

ExperimentConfig garch(std::vector<std::size_t> T, std::size_t reps) {
  ExperimentConfig c = ar1(std::move(T), reps);
  c.model = ModelKind::Garch11;
  c.theta = {0.1, 0.1, 0.8};
  return c;
}

bool in(double v, double lo, double hi) { return v >= lo && v <= hi; }

void criterion1() {
  Timer t;
  auto c = ar1({500}, 5000);
  c.variants = {Variant::TwoIP};
  const auto r = run_coverage(c).front();
  verdict(1, in(r.coverage, 0.88, 0.92) && r.failure_count == 0,
          "ar1 2ip T=500 R=5000 coverage=" + num(r.coverage) + " se=" + num(r.binomial_se) + " in [0.88, 0.92]",
          t.seconds());
}

void criterion2() {
  Timer t;
  auto a = ar1({2000}, 5000);
  a.variants = {Variant::SPL};
  const auto ra = run_coverage(a).front();
  auto g = garch({2000}, 2000);
  g.variants = {Variant::SPL};
  const auto rg = run_coverage(g).front();
  verdict(2, in(ra.coverage, 0.88, 0.92) && in(rg.coverage, 0.87, 0.93),
          "ar1 spl T=2000 R=5000 coverage=" + num(ra.coverage) + " in [0.88, 0.92]; garch spl T=2000 R=2000 coverage=" +
              num(rg.coverage) + " (failures " + std::to_string(rg.failure_count) + ") in [0.87, 0.93]",
          t.seconds());
}

void criteria3and4() {
  Timer t;
  const auto m = run_merging(ar1({500, 2000, 8000}, 2000));
  const auto& r = m.rows;
  const bool decreasing = r[0].d_bl > r[1].d_bl && r[1].d_bl > r[2].d_bl;
  const double factor = r[0].d_bl / r[2].d_bl;
  verdict(3, decreasing && factor >= 2.0,
          "d_bl=" + num(r[0].d_bl) + ", " + num(r[1].d_bl) + ", " + num(r[2].d_bl) + " factor=" + num(factor) +
              " (strictly decreasing, factor >= 2)",
          t.seconds());
  verdict(4, r[2].d_k_2ip < 0.05, "d_k(2ip law, plug-in normal) at T=8000 = " + num(r[2].d_k_2ip) + " < 0.05", 0.0);
}

bool equivalence_decreasing(const EquivalenceReport& e, std::string& detail) {
  const auto& r = e.rows;
  auto q95 = [](const EquivalenceRow& row) {
    for (const auto& q : row.quantile_gaps)
      if (std::abs(q.u - 0.95) < 1e-12) return q.median;
    return std::nan("");
  };
  detail += "center " + num(r[0].median_center_gap) + ", " + num(r[1].median_center_gap) + ", " +
            num(r[2].median_center_gap) + "; q0.95 " + num(q95(r[0])) + ", " + num(q95(r[1])) + ", " + num(q95(r[2]));
  return r[0].median_center_gap > r[1].median_center_gap && r[1].median_center_gap > r[2].median_center_gap &&
         q95(r[0]) > q95(r[1]) && q95(r[1]) > q95(r[2]);
}

void criterion5() {
  Timer t;
  std::string detail = "ar1 R=2000: ";
  const bool a = equivalence_decreasing(run_equivalence(ar1({500, 2000, 8000}, 2000)), detail);
  detail += " | garch R=200: ";
  const bool g = equivalence_decreasing(run_equivalence(garch({500, 2000, 8000}, 200)), detail);
  verdict(5, a && g, detail, t.seconds());
}

void criterion6() {
  Timer t;
  const double bl = d_bounded_lipschitz(StepCdf::point_mass(0.0), StepCdf::point_mass(1.0));
  const double lv = d_levy(StepCdf::point_mass(0.0), StepCdf::point_mass(0.3));
  bool ok = std::abs(bl - 2.0 / 3.0) <= 1e-8 && std::abs(lv - 0.3) <= 1e-9;
  std::mt19937_64 gen(kSeed);
  int bad_triangle = 0, bad_levy_k = 0, bad_levy_bl = 0, bad_bracket = 0;
  for (int i = 0; i < 200; ++i) {
    const auto f = oracle::random_step_cdf(gen, 10);
    const auto g = oracle::random_step_cdf(gen, 10);
    const auto h = oracle::random_step_cdf(gen, 10);
    const double dk = d_kolmogorov(f, g);
    if (dk > d_kolmogorov(f, h) + d_kolmogorov(h, g) + 1e-9) ++bad_triangle;
    const double dl = d_levy(f, g);
    if (dl > dk + 1e-9) ++bad_levy_k;
    if (dl > 2.0 * std::sqrt(d_bounded_lipschitz(f, g)) + 1e-9) ++bad_levy_bl;
    const double eps = dk + 1e-9;
    for (int k = 1; k < 200; ++k) {
      const double u = eps + (1.0 - 2.0 * eps) * k / 200.0;
      if (u <= eps || u >= 1.0 - eps) continue;
      const double gu = g.inverse(u);
      if (f.inverse(u - eps) - eps > gu || gu > f.inverse(u + eps) + eps) {
        ++bad_bracket;
        break;
      }
    }
  }
  ok = ok && bad_triangle == 0 && bad_levy_k == 0 && bad_levy_bl == 0 && bad_bracket == 0;
  verdict(6, ok,
          "d_bl(d0,d1)=" + num(bl) + " d_l(d0,d0.3)=" + num(lv) + "; violations over 200 pairs: triangle " +
              std::to_string(bad_triangle) + ", d_l<=d_k " + std::to_string(bad_levy_k) + ", d_l<=2sqrt(d_bl) " +
              std::to_string(bad_levy_bl) + ", bracketing " + std::to_string(bad_bracket),
          t.seconds());
}

void criterion7() {
  Timer t;
  std::mt19937_64 gen(kSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const double beta = 0.05 + 0.9 * unit(gen);
    const double alpha = 0.01 + (0.97 - beta) * unit(gen);
    const Garch11Params p{0.05 + unit(gen), alpha, beta};
    const std::size_t T = 20 + static_cast<std::size_t>(unit(gen) * 1000);
    const auto x = simulate_garch11({0.1, 0.1, 0.8}, T, kSeed + draw).series;
    const TruncationConfig trunc{1 + static_cast<std::size_t>(unit(gen) * static_cast<double>(T - 1)), {}, {}};
    const auto g = predict_garch11(p, x, trunc).gradient;
    const auto fd = oracle::central_gradient(
        [&](const std::vector<double>& th) { return predict_garch11(Garch11Params::from_theta(th), x, trunc).psi; },
        p.theta(), 1e-6);
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(g[i] - fd[i]) / std::abs(fd[i]));
  }
  verdict(7, worst < 1e-6, "max relative error over 100 draws = " + num(worst) + " < 1e-6", t.seconds());
}

bool same_numbers(const IntervalResult& a, const IntervalResult& b) {
  return a.lower == b.lower && a.upper == b.upper && a.center == b.center && a.variance == b.variance &&
         a.quantile_low == b.quantile_low && a.quantile_high == b.quantile_high && a.rate == b.rate &&
         a.gamma1 == b.gamma1 && a.gamma2 == b.gamma2;
}

void criterion8() {
  Timer t;
  const Gammas gam = Gammas::equal_tailed(0.1);
  const auto x = simulate_ar1({0.5, 1.0}, 500, kSeed);
  const auto y = simulate_garch11({0.1, 0.1, 0.8}, 1000, kSeed).series;
  const bool identity = same_numbers(build_interval_2ip(x, x, Ar1Model(), gam), build_interval_sta(x, Ar1Model(), gam)) &&
                        same_numbers(build_interval_2ip(y, y, Garch11Model(), gam),
                                     build_interval_sta(y, Garch11Model(), gam));

  using K = FillPolicy::Kind;
  const auto base = predict_ar1({0.5, 1.0}, x);
  bool invariant = true;
  for (std::size_t t1 : {std::size_t{1}, std::size_t{250}, std::size_t{500}})
    for (K s : {K::Zeros, K::UnconditionalMoment})
      for (K c : {K::Zeros, K::UnconditionalMoment}) {
        const auto o = predict_ar1({0.5, 1.0}, x, {t1, {s, {}}, {c, {}}});
        invariant = invariant && o.psi == base.psi && o.gradient == base.gradient;
      }

  bool constant = true;
  for (std::size_t t1 : {std::size_t{1}, std::size_t{500}, std::size_t{1000}})
    for (K s : {K::Zeros, K::UnconditionalMoment})
      constant = constant && std::abs(predict_garch11({0.1, 0.0, 0.8}, y, {t1, {s, {}}, {s, {}}}).psi - 0.5) <= 1e-14;

  auto c = ar1({300, 600, 1200}, 300);
  auto g = garch({400, 600, 1200}, 100);
  g.variants = {Variant::SPL};
  auto json = [](const ExperimentConfig& cfg, ReportResults r) {
    return report_to_json({report_kind(r), config_fields(cfg), std::move(r), cfg.seed});
  };
  bool replay = true;
  for (unsigned threads : {2u, 4u}) {
    replay = replay && json(c, run_coverage(c, {1})) == json(c, run_coverage(c, {threads}));
    replay = replay && json(c, run_merging(c, {1})) == json(c, run_merging(c, {threads}));
    replay = replay && json(c, run_equivalence(c, {1})) == json(c, run_equivalence(c, {threads}));
    replay = replay && json(g, run_coverage(g, {1})) == json(g, run_coverage(g, {threads}));
  }
  verdict(8, identity && invariant && constant && replay,
          std::string("2ip(y=x)==sta ") + (identity ? "yes" : "no") + ", ar1 truncation invariance " +
              (invariant ? "yes" : "no") + ", alpha=0 constant " + (constant ? "yes" : "no") +
              ", byte-identical JSON across 1/2/4 threads " + (replay ? "yes" : "no"),
          t.seconds());
}

void criterion9() {
  Timer t;
  auto g = garch({2000}, 1000);
  const auto n = run_negligibility(g);
  const bool slope = std::abs(n.slope - n.log_beta) <= 0.05;
  const bool split = n.split_row.max < 1e-3;
  verdict(9, slope && split,
          "slope=" + num(n.slope) + " ln(beta)=" + num(n.log_beta) + " (tol 0.05); m_T*gap at t1=" +
              std::to_string(n.split_row.t1) + ": median " + num(n.split_row.median) + ", max over reps " +
              num(n.split_row.max) + " < 1e-3",
          t.seconds());
}

void guarded(int id, void (*body)()) {
  try {
    body();
  } catch (const std::exception& e) {
    verdict(id, false, std::string("threw: ") + e.what(), 0.0);
  }
}

}  // namespace

int main() {
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criteria3and4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
