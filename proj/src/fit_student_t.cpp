#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>

#include "fit_internal.hpp"
#include "stablefit/errors.hpp"
#include "stablefit/estimation.hpp"
#include "stablefit/simd/kernels.hpp"

namespace stablefit {

namespace {

// Beyond this the t law is numerically indistinguishable from the Gaussian.
constexpr double kMaxLogDof = 13.815510557964274;  // log(1e6)
constexpr double kMinLogDof = -4.605170185988091;  // log(0.01)

double t_log_likelihood(std::span<const double> x, double dof, double loc, double scale) {
  const double n = static_cast<double>(x.size());
  const double sum = simd::log1p_quadratic_sum(x, loc, 1.0 / scale, 1.0 / dof);
  const double norm = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                      0.5 * std::log(dof * std::numbers::pi) - std::log(scale);
  return n * norm - 0.5 * (dof + 1.0) * sum;
}

}  // namespace

double student_t_log_pdf(double x, double dof, double location, double scale) {
  if (!(dof > 0.0)) throw DomainError("dof", "degrees of freedom must be positive");
  if (!(scale > 0.0)) throw DomainError("scale", "scale must be positive");
  const double z = (x - location) / scale;
  return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) - 0.5 * std::log(dof * std::numbers::pi) -
         std::log(scale) - 0.5 * (dof + 1.0) * std::log1p(z * z / dof);
}

double student_t_cdf(double x, double dof, double location, double scale) {
  if (!(dof > 0.0)) throw DomainError("dof", "degrees of freedom must be positive");
  if (!(scale > 0.0)) throw DomainError("scale", "scale must be positive");
  const double z = (x - location) / scale;
  if (std::isinf(z)) return z > 0.0 ? 1.0 : 0.0;
  return boost::math::cdf(boost::math::students_t_distribution<double>(dof), z);
}

TFitResult fit_student_t(std::span<const double> data) {
  const auto sorted = detail::checked_sorted(data, kMinObsStudentT, "Student-t fit");
  const double n = static_cast<double>(sorted.size());
  const double median = corrected_quantile(sorted, 0.5);
  double spread = corrected_quantile(sorted, 0.75) - corrected_quantile(sorted, 0.25);
  if (!(spread > 0.0)) spread = sorted.back() - sorted.front();

  // Coordinates: log dof, location in units of the spread, log scale relative to it.
  auto unpack = [&](const Eigen::VectorXd& v, double& dof, double& loc, double& scale) {
    dof = std::exp(std::clamp(v[0], kMinLogDof, kMaxLogDof));
    loc = median + spread * v[1];
    scale = spread * std::exp(v[2]);
  };
  auto objective = [&](const Eigen::VectorXd& v) {
    double dof, loc, scale;
    unpack(v, dof, loc, scale);
    const double excess = std::max(0.0, v[0] - kMaxLogDof) + std::max(0.0, kMinLogDof - v[0]);
    return -t_log_likelihood(sorted, dof, loc, scale) / n + excess * excess;
  };
  Eigen::VectorXd x(3), step(3);
  x << std::log(4.0), 0.0, std::log(0.5);
  step << 0.5, 0.1, 0.2;
  detail::NelderMeadResult nm;
  // Restart from the previous optimum to guard against a collapsed simplex.
  for (int round = 0; round < 3; ++round) {
    nm = detail::nelder_mead(objective, x, step, 1e-10, 4000);
    const bool moved = (nm.x - x).norm() > 1e-8;
    x = nm.x;
    step *= 0.1;
    if (!moved && round > 0) break;
  }
  TFitResult out;
  unpack(x, out.dof, out.location, out.scale);
  out.log_likelihood = t_log_likelihood(sorted, out.dof, out.location, out.scale);
  out.n_obs = data.size();
  out.converged = nm.converged;
  if (!std::isfinite(out.log_likelihood)) {
    throw ConvergenceError("Student-t fit produced a non-finite log-likelihood");
  }
  return out;
}

}  // namespace stablefit
