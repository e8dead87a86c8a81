#include "stablefit/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "stablefit/errors.hpp"
#include "stablefit/simd/kernels.hpp"

namespace stablefit {

double ks_statistic_sorted_cdf(std::span<const double> sorted_cdf) {
  if (sorted_cdf.empty()) throw InsufficientDataError(0, 1, "K-S statistic");
  for (double f : sorted_cdf) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw DomainError("cdf", "CDF value outside [0, 1]: " + std::to_string(f));
    }
  }
  return std::clamp(simd::ks_sup_deviation(sorted_cdf), 0.0, 1.0);
}

double ks_statistic(std::span<const double> data, const CdfFunction& cdf) {
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  for (double& x : sorted) x = cdf(x);
  return ks_statistic_sorted_cdf(sorted);
}

double ks_p_value(double statistic, std::size_t n) {
  if (!(statistic >= 0.0 && statistic <= 1.0)) {
    throw DomainError("statistic", "K-S statistic must lie in [0, 1]");
  }
  if (n == 0) throw DomainError("n", "sample size must be positive");
  if (statistic == 0.0) return 1.0;
  const double lambda = std::sqrt(static_cast<double>(n)) * statistic;
  constexpr double kCutoff = 1e-12;
  if (lambda < 1.0) {
    // Same function through the Jacobi theta identity; the alternating form converges
    // too slowly here.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1; k < 1000; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * pi2 / (8.0 * lambda * lambda));
      cdf += term;
      if (term < kCutoff * cdf) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    if (term < kCutoff) break;
    sum += (k % 2 == 1) ? term : -term;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> data, const CdfFunction& cdf) {
  KsResult out;
  out.statistic = ks_statistic(data, cdf);
  out.n_obs = data.size();
  out.p_value = ks_p_value(out.statistic, out.n_obs);
  return out;
}

CriticalValues ks_critical_values(std::size_t n, CriticalValueMethod method) {
  if (n == 0) throw DomainError("n", "sample size must be positive");
  const double root = std::sqrt(static_cast<double>(n));
  const double denom = method == CriticalValueMethod::stephens ? root + 0.12 + 0.11 / root : root;
  CriticalValues out;
  for (std::size_t i = 0; i < kKsCoefficients.size(); ++i) out.values[i] = kKsCoefficients[i] / denom;
  out.small_sample_warning = n < kKsMinAsymptoticN;
  return out;
}

double jarque_bera(std::size_t n, double skewness, double kurtosis) {
  const double excess = kurtosis - 3.0;
  return static_cast<double>(n) / 6.0 * (skewness * skewness + excess * excess / 4.0);
}

double jarque_bera(const SummaryStats& stats) {
  return jarque_bera(stats.n_obs, stats.skewness, stats.kurtosis);
}

std::string_view candidate_name(Candidate c) noexcept {
  switch (c) {
    case Candidate::stable:
      return "stable";
    case Candidate::cauchy:
      return "cauchy";
    case Candidate::student_t:
      return "student_t";
    case Candidate::levy:
      return "levy";
  }
  return "unknown";
}

std::array<bool, 4> ks_decisions(double statistic, const CriticalValues& critical) {
  std::array<bool, 4> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = statistic < critical.values[i];
  return out;
}

GofReport compare_distributions(std::span<const double> data, const FitResult& stable, const TFitResult& t) {
  if (data.empty()) throw InsufficientDataError(0, 1, "goodness of fit");
  GofReport report;
  report.n_obs = data.size();
  report.critical = ks_critical_values(data.size());
  report.stable = stable.params;
  report.student_t = t;
  report.cauchy = fit_cauchy(data);
  report.levy = fit_levy(data);

  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  auto evaluate = [&](Candidate c, const CdfFunction& cdf_fn) {
    std::vector<double> f(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) f[i] = cdf_fn(sorted[i]);
    CandidateResult r;
    r.candidate = c;
    r.ks.statistic = ks_statistic_sorted_cdf(f);
    r.ks.n_obs = sorted.size();
    r.ks.p_value = ks_p_value(r.ks.statistic, r.ks.n_obs);
    r.not_rejected = ks_decisions(r.ks.statistic, report.critical);
    report.results[static_cast<std::size_t>(c)] = r;
  };
  evaluate(Candidate::stable, [&](double x) { return cdf(report.stable, x); });
  evaluate(Candidate::cauchy, [&](double x) { return cdf(report.cauchy.params, x); });
  evaluate(Candidate::student_t, [&](double x) { return student_t_cdf(x, t.dof, t.location, t.scale); });
  evaluate(Candidate::levy, [&](double x) { return cdf(report.levy.params, x); });
  return report;
}

}  // namespace stablefit
