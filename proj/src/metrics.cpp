#include "condint/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "condint/error.hpp"

namespace condint {

StepCdf::StepCdf(std::vector<double> support, std::vector<double> cum)
    : support_(std::move(support)), cum_(std::move(cum)) {
  require(!support_.empty() && support_.size() == cum_.size(), ErrorCode::InvalidParameter,
          "StepCdf needs matching nonempty support and weights");
  for (std::size_t i = 0; i < support_.size(); ++i) {
    require(std::isfinite(support_[i]) && std::isfinite(cum_[i]), ErrorCode::InvalidParameter,
            "StepCdf entries must be finite");
    if (i > 0) {
      require(support_[i] > support_[i - 1], ErrorCode::InvalidParameter, "StepCdf support must increase strictly");
      require(cum_[i] >= cum_[i - 1], ErrorCode::InvalidParameter, "StepCdf weights must be nondecreasing");
    }
  }
  require(cum_.front() >= 0.0 && std::abs(cum_.back() - 1.0) <= 1e-12, ErrorCode::InvalidParameter,
          "StepCdf weights must lie in [0, 1] and end at 1");
}

StepCdf StepCdf::point_mass(double z) { return StepCdf({z}, {1.0}); }

StepCdf StepCdf::from_samples(std::span<const double> samples) {
  require(!samples.empty(), ErrorCode::Precondition, "empty sample");
  std::vector<double> s(samples.begin(), samples.end());
  for (double v : s) require(std::isfinite(v), ErrorCode::InvalidParameter, "samples must be finite");
  std::sort(s.begin(), s.end());
  std::vector<double> support, cum;
  const double n = static_cast<double>(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i + 1 < s.size() && s[i + 1] == s[i]) continue;
    support.push_back(s[i]);
    cum.push_back(static_cast<double>(i + 1) / n);
  }
  return StepCdf(std::move(support), std::move(cum));
}

double StepCdf::eval(double tau) const noexcept {
  const auto k = std::upper_bound(support_.begin(), support_.end(), tau) - support_.begin();
  return k == 0 ? 0.0 : cum_[static_cast<std::size_t>(k - 1)];
}

double StepCdf::eval_left(double tau) const noexcept {
  const auto k = std::lower_bound(support_.begin(), support_.end(), tau) - support_.begin();
  return k == 0 ? 0.0 : cum_[static_cast<std::size_t>(k - 1)];
}

double StepCdf::inverse(double u) const {
  require(u > 0.0 && u <= 1.0, ErrorCode::InvalidParameter, "generalized inverse needs 0 < u <= 1");
  const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
  if (it == cum_.end()) return support_.back();
  return support_[static_cast<std::size_t>(it - cum_.begin())];
}

namespace {

// Orders the pair so every metric sees identical arguments regardless of
// call order, which makes symmetry exact.
bool canonical_less(const StepCdf& a, const StepCdf& b) {
  if (a.support() != b.support()) return a.support() < b.support();
  return a.cum() < b.cum();
}

struct Pooled {
  std::vector<double> z;
  std::vector<double> diff;  // mass of F minus mass of G at z
};

Pooled pool(const StepCdf& f, const StepCdf& g) {
  Pooled p;
  const auto& zf = f.support();
  const auto& zg = g.support();
  std::size_t i = 0, j = 0;
  while (i < zf.size() || j < zg.size()) {
    if (j == zg.size() || (i < zf.size() && zf[i] < zg[j])) {
      p.z.push_back(zf[i]);
      p.diff.push_back(f.mass(i++));
    } else if (i == zf.size() || zg[j] < zf[i]) {
      p.z.push_back(zg[j]);
      p.diff.push_back(-g.mass(j++));
    } else {
      p.z.push_back(zf[i]);
      p.diff.push_back(f.mass(i++) - g.mass(j++));
    }
  }
  return p;
}

}  // namespace

double d_kolmogorov(const StepCdf& f, const StepCdf& g) {
  const auto& zf = f.support();
  const auto& zg = g.support();
  std::size_t i = 0, j = 0;
  double vf = 0.0, vg = 0.0, best = 0.0;
  while (i < zf.size() || j < zg.size()) {
    double z;
    if (j == zg.size() || (i < zf.size() && zf[i] <= zg[j]))
      z = zf[i];
    else
      z = zg[j];
    while (i < zf.size() && zf[i] == z) vf = f.cum()[i++];
    while (j < zg.size() && zg[j] == z) vg = g.cum()[j++];
    best = std::max(best, std::abs(vf - vg));
  }
  return best;
}

double d_kolmogorov(const StepCdf& f, const std::function<double(double)>& continuous_g) {
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double gz = continuous_g(f.support()[i]);
    const double left = i == 0 ? 0.0 : f.cum()[i - 1];
    best = std::max({best, std::abs(f.cum()[i] - gz), std::abs(left - gz)});
  }
  return best;
}

namespace {

// G(tau - xi) - xi <= F(tau) <= G(tau + xi) + xi for all tau. Both sides are
// right-continuous step functions of tau, so the extreme values are taken at
// breakpoints: the support of F and the support of G shifted by -+xi.
bool levy_feasible(const StepCdf& f, const StepCdf& g, double xi) {
  for (double z : f.support()) {
    const double fz = f.eval(z);
    if (fz > g.eval(z + xi) + xi) return false;
    if (g.eval(z - xi) - xi > fz) return false;
  }
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double gz = g.cum()[j];
    const double z = g.support()[j];
    if (f.eval(z - xi) > gz + xi) return false;  // tau = z - xi, G(tau + xi) = G(z)
    if (gz - xi > f.eval(z + xi)) return false;  // tau = z + xi, G(tau - xi) = G(z)
  }
  return true;
}

}  // namespace

double d_levy(const StepCdf& f_in, const StepCdf& g_in) {
  const bool swap = canonical_less(g_in, f_in);
  const StepCdf& f = swap ? g_in : f_in;
  const StepCdf& g = swap ? f_in : g_in;
  if (levy_feasible(f, g, 0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (levy_feasible(f, g, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

namespace {

// max sum_i h_i d_i s.t. |h_i| <= a, |h_{i+1} - h_i| <= lip * (z_{i+1} - z_i).
// V_i(y), the best partial value with h_i = y, is concave piecewise linear on
// [-a, a]. It is stored as its value at -a plus segments keyed by slope
// (minus a running offset), so the three DP moves are cheap: adding d_i y
// shifts the offset, the window max inserts a flat piece at the peak, and
// restricting to [-a, a] trims both ends.
double chain_lp(const Pooled& p, double lip) {
  const double a = 1.0 - lip;
  if (a <= 0.0) return 0.0;
  std::map<double, double> seg;  // stored slope -> length
  double off = 0.0;
  double v_lo = 0.0;
  seg[0.0] = 2.0 * a;

  auto add_linear = [&](double d) {
    off += d;
    v_lo -= a * d;
  };
  auto trim = [&](double c) {
    double need = c;
    while (need > 0.0 && !seg.empty()) {
      auto it = std::prev(seg.end());
      const double take = std::min(need, it->second);
      v_lo += (it->first + off) * take;
      need -= take;
      it->second -= take;
      if (it->second <= 0.0) seg.erase(it);
    }
    need = c;
    while (need > 0.0 && !seg.empty()) {
      auto it = seg.begin();
      const double take = std::min(need, it->second);
      need -= take;
      it->second -= take;
      if (it->second <= 0.0) seg.erase(it);
    }
  };

  add_linear(p.diff[0]);
  for (std::size_t i = 1; i < p.z.size(); ++i) {
    const double c = lip * (p.z[i] - p.z[i - 1]);
    if (c > 0.0) {
      seg[-off] += 2.0 * c;
      trim(c);
    }
    add_linear(p.diff[i]);
  }
  double best = v_lo;
  for (auto it = seg.rbegin(); it != seg.rend(); ++it) {
    const double slope = it->first + off;
    if (slope <= 0.0) break;
    best += slope * it->second;
  }
  return best;
}

}  // namespace

double bounded_lipschitz_fixed_budget(const StepCdf& f_in, const StepCdf& g_in, double lipschitz) {
  require(lipschitz >= 0.0 && lipschitz <= 1.0, ErrorCode::InvalidParameter, "Lipschitz budget must lie in [0, 1]");
  const bool swap = canonical_less(g_in, f_in);
  return chain_lp(swap ? pool(g_in, f_in) : pool(f_in, g_in), lipschitz);
}

double d_bounded_lipschitz(const StepCdf& f_in, const StepCdf& g_in) {
  const bool swap = canonical_less(g_in, f_in);
  const Pooled p = swap ? pool(g_in, f_in) : pool(f_in, g_in);
  if (p.z.size() < 2) return 0.0;

  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0, hi = 1.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = chain_lp(p, x1), f2 = chain_lp(p, x2);
  double best = std::max({0.0, f1, f2});
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = chain_lp(p, x2);
      best = std::max(best, f2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = chain_lp(p, x1);
      best = std::max(best, f1);
    }
  }
  return best;
}

}  // namespace condint
