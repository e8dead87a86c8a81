#pragma once

#include <span>
#include <vector>

#include "stablefit/stable_params.hpp"

namespace stablefit {

/// How pdf/cdf pick an evaluation route.
enum class DensityMethod {
  automatic,  ///< closed forms for the Gaussian, Cauchy and Levy members, integral otherwise
  integral,   ///< never use closed forms; alpha = 1, beta = 0 falls back to Fourier inversion
  fourier,    ///< numerical inversion of the characteristic function (cross-check route)
};

struct EvalOptions {
  /// Relative accuracy target for densities and probabilities.
  double rel_tol = 1e-10;
  /// Absolute floor for probabilities (CDF values). Densities are controlled in relative terms.
  double abs_tol = 1e-12;
  int max_subdivisions = 1000;
  DensityMethod method = DensityMethod::automatic;
};

/// Throws DomainError unless tolerances are positive and max_subdivisions >= 10.
void validate(const EvalOptions& opts);

/// Lower and upper tail probabilities P(X <= x), P(X > x). Each is computed directly so
/// that a small tail keeps full relative accuracy; lower + upper == 1 up to rounding.
struct TailProbabilities {
  double lower = 0.0;
  double upper = 0.0;
};

double pdf(const StableParams& params, double x, const EvalOptions& opts = {});
double log_pdf(const StableParams& params, double x, const EvalOptions& opts = {});
double cdf(const StableParams& params, double x, const EvalOptions& opts = {});
TailProbabilities tail_probabilities(const StableParams& params, double x,
                                     const EvalOptions& opts = {});
double quantile(const StableParams& params, double p, const EvalOptions& opts = {});

std::vector<double> pdf(const StableParams& params, std::span<const double> xs,
                        const EvalOptions& opts = {});
std::vector<double> cdf(const StableParams& params, std::span<const double> xs,
                        const EvalOptions& opts = {});

double std_normal_cdf(double x) noexcept;

/// Closed forms of the three classical members, written exactly as the textbook formulas
/// in terms of the stable (gamma, delta). These never call the integral machinery.
namespace closed_form {
double gaussian_pdf(double x, double gamma, double delta) noexcept;
double gaussian_cdf(double x, double gamma, double delta) noexcept;
double cauchy_pdf(double x, double gamma, double delta) noexcept;
double cauchy_cdf(double x, double gamma, double delta) noexcept;
double levy_pdf(double x, double gamma, double delta) noexcept;
double levy_cdf(double x, double gamma, double delta) noexcept;
}  // namespace closed_form

/// Leading-order Paretian tail mass P(X > x) ~ C_alpha (1 + beta) x^-alpha (and the mirrored
/// left tail with 1 - beta), for S1 parameters with alpha < 2. Exposed for tail-mass checks.
double paretian_tail_mass(const StableParams& params, double x);

}  // namespace stablefit
