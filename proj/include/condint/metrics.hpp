#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace condint {

/// Right-continuous step CDF: F(tau) = cum[i] for the largest support[i] <= tau,
/// 0 to the left of support[0]. Support strictly increasing, cum ends at 1.
class StepCdf {
 public:
  StepCdf(std::vector<double> support, std::vector<double> cum);

  /// Point mass at z.
  static StepCdf point_mass(double z);
  /// Empirical CDF with weight 1/n per sample, ties merged.
  static StepCdf from_samples(std::span<const double> samples);

  std::size_t size() const noexcept { return support_.size(); }
  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& cum() const noexcept { return cum_; }

  double eval(double tau) const noexcept;
  /// Left limit F(tau-).
  double eval_left(double tau) const noexcept;
  /// inf{tau : F(tau) >= u} for 0 < u <= 1.
  double inverse(double u) const;
  /// Mass at support[i].
  double mass(std::size_t i) const noexcept { return i == 0 ? cum_[0] : cum_[i] - cum_[i - 1]; }

  bool operator==(const StepCdf&) const = default;

 private:
  std::vector<double> support_;
  std::vector<double> cum_;
};

inline StepCdf from_samples(std::span<const double> samples) { return StepCdf::from_samples(samples); }
inline double eval(const StepCdf& cdf, double tau) noexcept { return cdf.eval(tau); }
inline double generalized_inverse(const StepCdf& cdf, double u) { return cdf.inverse(u); }

/// sup_tau |F(tau) - G(tau)|, exact on the pooled support.
double d_kolmogorov(const StepCdf& f, const StepCdf& g);

/// sup_tau |F(tau) - G(tau)| against a continuous CDF G; checks both the
/// value and the left limit of F at each atom.
double d_kolmogorov(const StepCdf& f, const std::function<double(double)>& continuous_g);

/// Levy distance by bisection on xi to 1e-10. Feasibility is checked on the
/// breakpoints of F and on those of G shifted by +-xi, which is exact for
/// step functions.
double d_levy(const StepCdf& f, const StepCdf& g);

/// Bounded-Lipschitz distance sup{ |int h d(F - G)| : sup|h| + Lip(h) <= 1 }.
/// For a fixed Lipschitz budget L the problem is a chain LP over h on the
/// pooled support, solved exactly by propagating a concave piecewise-linear
/// value function; the outer maximization over L (concave) is golden-section.
double d_bounded_lipschitz(const StepCdf& f, const StepCdf& g);

/// Value of the fixed-L chain LP: max sum_i h_i (p_i - q_i) subject to
/// |h_i| <= 1 - L and |h_{i+1} - h_i| <= L (z_{i+1} - z_i).
double bounded_lipschitz_fixed_budget(const StepCdf& f, const StepCdf& g, double lipschitz);

}  // namespace condint
