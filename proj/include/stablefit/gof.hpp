#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>

#include "stablefit/data_io.hpp"
#include "stablefit/estimation.hpp"

namespace stablefit {

/// Significance levels of the critical-value rows, in table order.
inline constexpr std::array<double, 4> kSignificanceLevels = {0.20, 0.10, 0.05, 0.01};
/// Asymptotic Kolmogorov quantiles c_l for those levels.
inline constexpr std::array<double, 4> kKsCoefficients = {1.073, 1.224, 1.358, 1.628};
/// Below this sample size the critical values carry a small-sample warning.
inline constexpr std::size_t kKsMinAsymptoticN = 35;

using CdfFunction = std::function<double(double)>;

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_obs = 0;
};

enum class CriticalValueMethod {
  stephens,    ///< c / (sqrt(n) + 0.12 + 0.11 / sqrt(n))
  asymptotic,  ///< c / sqrt(n)
};

struct CriticalValues {
  std::array<double, 4> values{};  ///< for kSignificanceLevels
  bool small_sample_warning = false;
};

/// D_n = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n). Throws DomainError when F leaves
/// [0, 1] (or is NaN), InsufficientDataError for empty data.
double ks_statistic(std::span<const double> data, const CdfFunction& cdf);

/// The same from CDF values already evaluated at the ascending order statistics.
double ks_statistic_sorted_cdf(std::span<const double> sorted_cdf);

/// Asymptotic Kolmogorov tail 2 sum (-1)^(k-1) exp(-2 k^2 n D^2), clamped to [0, 1].
double ks_p_value(double statistic, std::size_t n);

KsResult ks_test(std::span<const double> data, const CdfFunction& cdf);

CriticalValues ks_critical_values(std::size_t n, CriticalValueMethod method = CriticalValueMethod::stephens);

/// (n / 6) (S^2 + (K - 3)^2 / 4) with raw kurtosis K.
double jarque_bera(const SummaryStats& stats);
double jarque_bera(std::size_t n, double skewness, double kurtosis);

enum class Candidate { stable, cauchy, student_t, levy };
inline constexpr std::array<Candidate, 4> kCandidates = {Candidate::stable, Candidate::cauchy, Candidate::student_t,
                                                         Candidate::levy};
std::string_view candidate_name(Candidate c) noexcept;

struct CandidateResult {
  Candidate candidate = Candidate::stable;
  KsResult ks;
  /// not_rejected[l] is true iff ks.statistic < critical value at kSignificanceLevels[l].
  std::array<bool, 4> not_rejected{};
};

struct GofReport {
  std::size_t n_obs = 0;
  CriticalValues critical;
  std::array<CandidateResult, 4> results{};  ///< in kCandidates order
  StableParams stable;                       ///< S1
  ConstrainedFit cauchy;
  TFitResult student_t;
  ConstrainedFit levy;

  const CandidateResult& result(Candidate c) const { return results[static_cast<std::size_t>(c)]; }
};

/// Decision flags as a pure function of the statistic and the critical values.
std::array<bool, 4> ks_decisions(double statistic, const CriticalValues& critical);

/// K-S comparison of the fitted stable law, the fitted Student-t, and Cauchy and Levy laws
/// refitted by their own maximum likelihood, all against the same critical values.
GofReport compare_distributions(std::span<const double> data, const FitResult& stable, const TFitResult& t);
inline GofReport compare_distributions(const ReturnSeries& s, const FitResult& stable, const TFitResult& t) {
  return compare_distributions(s.returns, stable, t);
}

}  // namespace stablefit
