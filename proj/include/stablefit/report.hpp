#pragma once

// Text tables (4 significant figures, laid out like the printed tables) and JSON documents
// (full precision) for summaries, fits and goodness-of-fit reports.

#include <optional>
#include <string>
#include <vector>

#include "stablefit/data_io.hpp"
#include "stablefit/estimation.hpp"
#include "stablefit/gof.hpp"

namespace stablefit {

/// printf "%.4g".
std::string format_sig4(double v);

/// One requested estimator: either a fit or the error message it raised.
struct FitRow {
  FitMethod method = FitMethod::mle;
  std::optional<FitResult> fit;
  std::string error;
};

std::string render_summary_table(const ReturnSeries& series, const SummaryStats& stats);
std::string render_fit_table(const ReturnSeries& series, const std::vector<FitRow>& rows);
std::string render_gof_table(const ReturnSeries& series, const GofReport& report);

/// JSON documents. Field names:
///  summary: asset, first_date, last_date, n_obs, mean, std_dev, skewness, kurtosis, min,
///           max, jarque_bera
///  fit:     asset, n_obs, fits[] {method, ok, error | alpha, beta, gamma, delta,
///           parameterization, std_errors{alpha,beta,gamma,delta} | null,
///           log_likelihood | null, converged, table_clamped, box_clamped, notes[]}
///  gof:     asset, n_obs, levels[], critical_values[], small_sample_warning,
///           candidates[] {name, statistic, p_value, n_obs, not_rejected[]},
///           parameters {stable, cauchy, levy: {alpha, beta, gamma, delta, ...},
///           student_t: {dof, location, scale, log_likelihood, converged}}
std::string summary_json(const ReturnSeries& series, const SummaryStats& stats);
std::string fit_json(const ReturnSeries& series, const std::vector<FitRow>& rows);
std::string gof_json(const ReturnSeries& series, const GofReport& report);

}  // namespace stablefit
