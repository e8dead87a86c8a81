#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stablefit/density.hpp"
#include "stablefit/mcculloch.hpp"
#include "stablefit/series.hpp"
#include "stablefit/stable_params.hpp"

namespace stablefit {

enum class FitMethod { mle, quantile, ecf };

std::string_view method_name(FitMethod m) noexcept;

/// Standard errors of the S1 parameters.
struct StandardErrors {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

struct FitResult {
  StableParams params;  ///< always S1
  std::optional<StandardErrors> std_errors;
  std::optional<double> log_likelihood;
  FitMethod method = FitMethod::mle;
  std::size_t n_obs = 0;
  bool converged = false;
  /// Input fell outside the McCulloch tables and was clamped (quantile method, and the
  /// quantile pre-standardization of ECF).
  bool table_clamped = false;
  /// The regression left the parameter box and was clamped back (ECF only).
  bool box_clamped = false;
  std::vector<std::string> notes;
};

/// Location-scale Student-t: (x - location) / scale ~ t(dof).
struct TFitResult {
  double dof = 0.0;
  double location = 0.0;
  double scale = 0.0;
  double log_likelihood = 0.0;
  std::size_t n_obs = 0;
  bool converged = false;
};

/// Closed-form family fitted with alpha and beta held fixed (Cauchy: 1, 0; Levy: 1/2, 1).
struct ConstrainedFit {
  StableParams params;  ///< S1
  double log_likelihood = 0.0;
  bool converged = false;
};

/// Minimum sample sizes.
inline constexpr std::size_t kMinObsMle = 20;
inline constexpr std::size_t kMinObsQuantile = 100;
inline constexpr std::size_t kMinObsEcf = 100;
inline constexpr std::size_t kMinObsStudentT = 20;

struct MleOptions {
  EvalOptions eval;
  /// Spacing of the log-density table in u = asinh(z) used while optimizing.
  double table_step = 0.01;
  int max_outer_iterations = 400;
  /// Evaluate the final log-likelihood exactly rather than from the table.
  bool exact_final_loglik = true;
  /// Starting point; the quantile estimate when absent (or a generic start for n < 100).
  std::optional<StableParams> start;
};

/// Sample quantile of order p with McCulloch's continuity correction: the order statistic
/// at (1-based) position p n + 1/2, linearly interpolated and clamped to the sample range.
/// `sorted` must be in ascending order.
double corrected_quantile(std::span<const double> sorted, double p);

FitResult fit_mle(std::span<const double> data, const MleOptions& opts = {});
FitResult fit_quantile(std::span<const double> data, const McCullochTables& tables);
FitResult fit_quantile(std::span<const double> data);
FitResult fit_ecf(std::span<const double> data, const McCullochTables& tables);
FitResult fit_ecf(std::span<const double> data);
TFitResult fit_student_t(std::span<const double> data);
ConstrainedFit fit_cauchy(std::span<const double> data);
ConstrainedFit fit_levy(std::span<const double> data);

inline FitResult fit_mle(const ReturnSeries& s, const MleOptions& o = {}) { return fit_mle(s.returns, o); }
inline FitResult fit_quantile(const ReturnSeries& s) { return fit_quantile(s.returns); }
inline FitResult fit_ecf(const ReturnSeries& s) { return fit_ecf(s.returns); }
inline TFitResult fit_student_t(const ReturnSeries& s) { return fit_student_t(s.returns); }

/// Sum of log pdf over the data, evaluated exactly (one quadrature per point).
double stable_log_likelihood(const StableParams& params, std::span<const double> data,
                             const EvalOptions& opts = {});

/// Student-t log density and CDF for the location-scale family.
double student_t_log_pdf(double x, double dof, double location, double scale);
double student_t_cdf(double x, double dof, double location, double scale);

/// The regression core of the ECF method. `phi` holds the characteristic function
/// (empirical or exact) of standardized data at the points `t`. Returns S0 parameters
/// of the standardized law; no clamping.
StableParams ecf_regression(std::span<const double> t, std::span<const std::complex<double>> phi);

/// The ECF evaluation grid t_k = k / 10, k = 1..10.
std::vector<double> ecf_grid();

}  // namespace stablefit
