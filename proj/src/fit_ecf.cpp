#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fit_internal.hpp"
#include "stablefit/errors.hpp"
#include "stablefit/estimation.hpp"
#include "stablefit/simd/kernels.hpp"

namespace stablefit {

namespace {

// tan(pi a / 2) ((g t)^a - g t), continuous through a = 1 where it tends to
// -(2/pi) g t log(g t).
double phase_regressor(double alpha, double gt) {
  const double log_gt = std::log(gt);
  if (is_alpha_one(alpha)) return -(2.0 / std::numbers::pi) * gt * log_gt;
  return tan_pi_alpha_half(alpha) * gt * std::expm1((alpha - 1.0) * log_gt);
}

}  // namespace

std::vector<double> ecf_grid() {
  std::vector<double> t(10);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k + 1) / 10.0;
  return t;
}

StableParams ecf_regression(std::span<const double> t, std::span<const std::complex<double>> phi) {
  if (t.size() != phi.size() || t.size() < 2) throw DomainError("t", "ecf regression needs matching grids of >= 2 points");
  const std::size_t k = t.size();

  // log(-log |phi|^2) = log 2 + alpha log gamma + alpha log t.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double m = std::norm(phi[i]);
    if (!(m > 0.0 && m < 1.0)) throw DegenerateDataError("ecf method: |phi(t)| must lie strictly inside (0, 1)");
    const double x = std::log(t[i]);
    const double y = std::log(-std::log(m));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double kk = static_cast<double>(k);
  const double alpha = (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
  const double intercept = (sy - alpha * sx) / kk;
  const double gamma = std::exp((intercept - std::numbers::ln2) / alpha);

  // arg phi(t) = delta t + beta h(t), no intercept. The regressor uses alpha clipped to the
  // admissible range so that it stays defined.
  const double a = std::clamp(alpha, 1e-3, 2.0);
  double stt = 0.0, sth = 0.0, shh = 0.0, stp = 0.0, shp = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double h = phase_regressor(a, gamma * t[i]);
    const double p = std::arg(phi[i]);
    stt += t[i] * t[i];
    sth += t[i] * h;
    shh += h * h;
    stp += t[i] * p;
    shp += h * p;
  }
  const double det = stt * shh - sth * sth;
  double beta = 0.0;
  double delta = stp / stt;
  if (det > 1e-12 * stt * shh) {
    beta = (stt * shp - sth * stp) / det;
    delta = (shh * stp - sth * shp) / det;
  }
  return StableParams{alpha, beta, gamma, delta, Parameterization::S0};
}

FitResult fit_ecf(std::span<const double> data, const McCullochTables& tables) {
  const auto sorted = detail::checked_sorted(data, kMinObsEcf, "ecf method");
  const auto start = detail::quantile_estimate(sorted, tables);
  const double scale = start.s0.gamma;
  const double loc = start.s0.delta;

  std::vector<double> z(sorted.size());
  std::transform(sorted.begin(), sorted.end(), z.begin(), [&](double v) { return (v - loc) / scale; });
  const auto t = ecf_grid();
  std::vector<std::complex<double>> phi(t.size());
  const double inv_n = 1.0 / static_cast<double>(z.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto s = simd::trig_sums(z, t[i]);
    phi[i] = {s.cos_sum * inv_n, s.sin_sum * inv_n};
  }
  StableParams std_fit = ecf_regression(t, phi);

  FitResult out;
  out.method = FitMethod::ecf;
  out.n_obs = data.size();
  out.converged = true;
  out.table_clamped = start.clamped;
  if (!(std_fit.alpha > 0.0 && std_fit.alpha <= 2.0) || !(std::abs(std_fit.beta) <= 1.0)) {
    out.box_clamped = true;
    out.notes.emplace_back("regression estimate outside the parameter box; clamped");
    std_fit.alpha = std::clamp(std_fit.alpha, 1e-3, 2.0);
    std_fit.beta = std::clamp(std_fit.beta, -1.0, 1.0);
  }
  if (!std::isfinite(std_fit.gamma) || !std::isfinite(std_fit.delta) || !(std_fit.gamma > 0.0)) {
    throw DegenerateDataError("ecf method: regression produced a non-finite estimate");
  }
  const StableParams s0{std_fit.alpha, std_fit.beta, std_fit.gamma * scale, std_fit.delta * scale + loc,
                        Parameterization::S0};
  out.params = from_s0(s0);
  return out;
}

FitResult fit_ecf(std::span<const double> data) { return fit_ecf(data, default_mcculloch_tables()); }

}  // namespace stablefit
