#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "fit_internal.hpp"
#include "stablefit/errors.hpp"
#include "stablefit/estimation.hpp"
#include "stablefit/simd/kernels.hpp"

namespace stablefit {

namespace {

double cauchy_log_likelihood(std::span<const double> x, double gamma, double delta) {
  const double n = static_cast<double>(x.size());
  return -n * std::log(std::numbers::pi * gamma) - simd::log1p_quadratic_sum(x, delta, 1.0 / gamma, 1.0);
}

// Levy log-likelihood with gamma profiled out in closed form: for fixed delta below the
// sample minimum the maximizing gamma is n / sum 1/(x - delta).
struct LevyProfile {
  double gamma;
  double value;
};

LevyProfile levy_profile(std::span<const double> x, double delta) {
  const double n = static_cast<double>(x.size());
  double inv_sum = 0.0, log_sum = 0.0;
  for (double xi : x) {
    const double d = xi - delta;
    inv_sum += 1.0 / d;
    log_sum += std::log(d);
  }
  const double gamma = n / inv_sum;
  const double value = 0.5 * n * std::log(gamma / (2.0 * std::numbers::pi)) - 1.5 * log_sum - 0.5 * gamma * inv_sum;
  return {gamma, value};
}

}  // namespace

ConstrainedFit fit_cauchy(std::span<const double> data) {
  const auto sorted = detail::checked_sorted(data, 2, "Cauchy fit");
  const double n = static_cast<double>(sorted.size());
  const double median = corrected_quantile(sorted, 0.5);
  double spread = 0.5 * (corrected_quantile(sorted, 0.75) - corrected_quantile(sorted, 0.25));
  if (!(spread > 0.0)) spread = sorted.back() - sorted.front();

  auto objective = [&](const Eigen::VectorXd& v) {
    return -cauchy_log_likelihood(sorted, spread * std::exp(v[0]), median + spread * v[1]) / n;
  };
  Eigen::VectorXd x(2), step(2);
  x << 0.0, 0.0;
  step << 0.2, 0.2;
  detail::NelderMeadResult nm;
  for (int round = 0; round < 3; ++round) {
    nm = detail::nelder_mead(objective, x, step, 1e-10, 4000);
    const bool moved = (nm.x - x).norm() > 1e-8;
    x = nm.x;
    step *= 0.1;
    if (!moved && round > 0) break;
  }
  ConstrainedFit out;
  out.params = StableParams{1.0, 0.0, spread * std::exp(x[0]), median + spread * x[1], Parameterization::S1};
  out.log_likelihood = cauchy_log_likelihood(sorted, out.params.gamma, out.params.delta);
  out.converged = nm.converged;
  return out;
}

ConstrainedFit fit_levy(std::span<const double> data) {
  const auto sorted = detail::checked_sorted(data, 2, "Levy fit");
  const double lo = sorted.front();
  const double range = sorted.back() - sorted.front();

  // delta = min(x) - range * e^s. Coarse scan for the best bracket, then Brent.
  auto negative = [&](double s) { return -levy_profile(sorted, lo - range * std::exp(s)).value; };
  constexpr double kLow = -30.0, kHigh = 10.0;
  constexpr int kScan = 200;
  int best = 0;
  double best_value = negative(kLow);
  for (int i = 1; i <= kScan; ++i) {
    const double v = negative(kLow + (kHigh - kLow) * i / kScan);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double h = (kHigh - kLow) / kScan;
  const double a = kLow + h * std::max(0, best - 1);
  const double b = kLow + h * std::min(kScan, best + 1);
  const auto [s, value] = boost::math::tools::brent_find_minima(negative, a, b, 52);

  ConstrainedFit out;
  const double delta = lo - range * std::exp(s);
  const auto prof = levy_profile(sorted, delta);
  out.params = StableParams{0.5, 1.0, prof.gamma, delta, Parameterization::S1};
  out.log_likelihood = prof.value;
  // An optimum at the scan edge means the profile was still improving there.
  out.converged = best > 0 && best < kScan && std::isfinite(value);
  return out;
}

}  // namespace stablefit
