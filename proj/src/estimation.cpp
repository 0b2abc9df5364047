#include "condint/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "condint/error.hpp"
#include "condint/rng.hpp"

namespace condint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ols_ratio(std::span<const double> x) {
  double num = 0.0, den = 0.0;
  for (std::size_t t = 1; t < x.size(); ++t) {
    num += x[t] * x[t - 1];
    den += x[t - 1] * x[t - 1];
  }
  require(den > 0.0, ErrorCode::Degenerate, "OLS denominator is zero");
  return num / den;
}

double sample_variance(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size());
}

std::vector<double> to_natural(std::span<const double> phi) {
  return {std::exp(phi[0]), std::exp(phi[1]), 1.0 / (1.0 + std::exp(-phi[2]))};
}

std::vector<double> to_unconstrained(const std::vector<double>& theta) {
  return {std::log(theta[0]), std::log(theta[1]), std::log(theta[2] / (1.0 - theta[2]))};
}

// sigma^2_t path for t = 1..T with sigma^2_1 = s1.
void variance_path(const double* theta, std::span<const double> x, double s1, std::vector<double>& out) {
  out.resize(x.size());
  double s2 = s1;
  out[0] = s2;
  for (std::size_t t = 1; t < x.size(); ++t) {
    s2 = theta[0] + theta[1] * x[t - 1] * x[t - 1] + theta[2] * s2;
    out[t] = s2;
  }
}

Eigen::Matrix3d sandwich_pieces(const std::vector<double>& theta, std::span<const double> x, double step,
                                Eigen::Matrix3d& info) {
  const double s1 = sample_variance(x);
  const std::size_t T = x.size();
  std::vector<double> base, up, down;
  variance_path(theta.data(), x, s1, base);
  std::vector<std::vector<double>> grad(3, std::vector<double>(T));
  for (int i = 0; i < 3; ++i) {
    const double h = step * std::max(std::abs(theta[i]), 1e-2);
    double tp[3] = {theta[0], theta[1], theta[2]};
    double tm[3] = {theta[0], theta[1], theta[2]};
    tp[i] += h;
    tm[i] -= h;
    variance_path(tp, x, s1, up);
    variance_path(tm, x, s1, down);
    for (std::size_t t = 0; t < T; ++t) grad[i][t] = (up[t] - down[t]) / (2.0 * h);
  }
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  info.setZero();
  for (std::size_t t = 0; t < T; ++t) {
    const Eigen::Vector3d g(grad[0][t], grad[1][t], grad[2][t]);
    const double s4 = base[t] * base[t];
    const Eigen::Matrix3d gg = g * g.transpose() / s4;
    const double r = 1.0 - x[t] * x[t] / base[t];
    J += gg;
    info += r * r * gg;
  }
  J /= static_cast<double>(T);
  info /= static_cast<double>(T);
  return J;
}

bool singular(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto ev = es.eigenvalues();
  return !(ev.maxCoeff() > 0.0) || ev.minCoeff() <= 1e-12 * ev.maxCoeff();
}

Matrix to_matrix(const Eigen::MatrixXd& m) {
  Matrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 0.5 * (m(i, j) + m(j, i));
  return out;
}

}  // namespace

EstimationResult estimate_ar1_ols(const TimeSeries& series) {
  require(series.size() >= 2, ErrorCode::Precondition, "OLS needs at least two observations");
  const double b = ols_ratio(series.values());
  EstimationResult res;
  res.theta = {b};
  res.cov = Matrix(1, 1, std::max(1.0 - b * b, kAr1VarianceFloor));
  res.n_used = series.size();
  res.rate = std::sqrt(static_cast<double>(series.size()));
  return res;
}

double garch11_qmle_objective(const std::vector<double>& theta, std::span<const double> x) {
  const double omega = theta[0], alpha = theta[1], beta = theta[2];
  if (!(std::isfinite(omega) && std::isfinite(alpha) && std::isfinite(beta))) return kInf;
  if (omega <= 0.0 || alpha < 0.0 || beta < 0.0 || beta >= 1.0 || alpha + beta >= 1.0) return kInf;
  double s2 = sample_variance(x);
  double sum = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (t > 0) s2 = omega + alpha * x[t - 1] * x[t - 1] + beta * s2;
    sum += std::log(s2) + x[t] * x[t] / s2;
  }
  return std::isfinite(sum) ? sum / static_cast<double>(x.size()) : kInf;
}

std::vector<NelderMeadResult> garch11_qmle_starts(const TimeSeries& series, const QmleOptions& options) {
  require(series.size() >= kQmleMinLength, ErrorCode::Precondition, "QMLE needs at least 250 observations");
  const auto x = series.values();
  const std::vector<std::vector<double>> starts = {{0.05, 0.05, 0.9}, {0.1, 0.1, 0.8}, {0.2, 0.2, 0.5}};
  auto f = [&](std::span<const double> phi) { return garch11_qmle_objective(to_natural(phi), x); };
  std::vector<NelderMeadResult> out;
  for (const auto& s : starts) {
    auto r = nelder_mead(f, to_unconstrained(s), options.optimizer);
    r.x = to_natural(r.x);
    out.push_back(std::move(r));
  }
  return out;
}

EstimationResult estimate_garch11_qmle(const TimeSeries& series, const QmleOptions& options) {
  const auto runs = garch11_qmle_starts(series, options);
  const NelderMeadResult* best = nullptr;
  const NelderMeadResult* best_any = &runs[0];
  std::size_t converged = 0, iterations = 0;
  for (const auto& r : runs) {
    iterations += r.iterations;
    if (r.value < best_any->value) best_any = &r;
    if (!r.converged) continue;
    ++converged;
    if (!best || r.value < best->value) best = &r;
  }
  if (!best) throw EstimationFailed("QMLE did not converge from any start", best_any->x, best_any->value);

  const auto x = series.values();
  Eigen::Matrix3d info;
  const Eigen::Matrix3d J = sandwich_pieces(best->x, x, options.score_step, info);

  EstimationResult res;
  res.theta = best->x;
  res.n_used = series.size();
  res.rate = std::sqrt(static_cast<double>(series.size()));
  res.diagnostics.iterations = iterations;
  res.diagnostics.objective = best->value;
  res.diagnostics.converged_starts = converged;

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(3, 3);
  if (!singular(J)) {
    const Eigen::Matrix3d Ji = J.inverse();
    cov = Ji * info * Ji;
  } else if (best->x[1] < options.identification_alpha) {
    const Eigen::Matrix2d J2 = J.topLeftCorner<2, 2>();
    require(!singular(J2), ErrorCode::SingularInformation, "QMLE information matrix is singular");
    const Eigen::Matrix2d Ji = J2.inverse();
    cov.topLeftCorner<2, 2>() = Ji * info.topLeftCorner<2, 2>() * Ji;
    res.diagnostics.beta_unidentified = true;
  } else {
    fail(ErrorCode::SingularInformation, "QMLE information matrix is singular");
  }
  require(cov.allFinite(), ErrorCode::SingularInformation, "QMLE sandwich covariance is not finite");
  res.cov = to_matrix(cov);
  return res;
}

CdfEstimate ghat_parametric_normal(const EstimationResult& est) {
  require(est.cov.rows == est.theta.size() && est.cov.cols == est.theta.size(), ErrorCode::Contract,
          "covariance dimension does not match theta");
  CdfEstimate g;
  g.kind = CdfEstimate::Kind::Normal;
  g.mean.assign(est.theta.size(), 0.0);
  g.cov = est.cov;
  return g;
}

CdfEstimate ghat_bootstrap_ar1(const TimeSeries& series, std::size_t n_boot, std::uint64_t seed) {
  require(series.size() >= 50, ErrorCode::Precondition, "AR(1) bootstrap needs at least 50 observations");
  require(n_boot >= 100, ErrorCode::Precondition, "AR(1) bootstrap needs at least 100 replications");
  const auto x = series.values();
  const std::size_t T = x.size();
  const double b = ols_ratio(x);

  std::vector<double> resid(T - 1);
  for (std::size_t t = 1; t < T; ++t) resid[t - 1] = x[t] - b * x[t - 1];
  double mean = 0.0;
  for (double e : resid) mean += e;
  mean /= static_cast<double>(resid.size());
  for (double& e : resid) e -= mean;
  const auto [lo, hi] = std::minmax_element(resid.begin(), resid.end());
  require(*hi > *lo, ErrorCode::Degenerate, "bootstrap residuals are all equal");

  CdfEstimate g;
  g.kind = CdfEstimate::Kind::Sample;
  g.draws = Matrix(n_boot, 1);
  const double m = std::sqrt(static_cast<double>(T));
  std::vector<double> y(T);
  for (std::size_t r = 0; r < n_boot; ++r) {
    Stream rng(seed, "ar1-bootstrap", r);
    y[0] = x[0];
    for (std::size_t t = 1; t < T; ++t) y[t] = b * y[t - 1] + resid[rng.below(resid.size())];
    double bstar;
    try {
      bstar = ols_ratio(y);
    } catch (const Error&) {
      fail(ErrorCode::Degenerate, "bootstrap path is degenerate");
    }
    g.draws(r, 0) = m * (bstar - b);
  }
  return g;
}

}  // namespace condint
