#include "fit_internal.hpp"
#include "stablefit/estimation.hpp"

namespace stablefit {

FitResult fit_quantile(std::span<const double> data, const McCullochTables& tables) {
  const auto sorted = detail::checked_sorted(data, kMinObsQuantile, "quantile method");
  const auto est = detail::quantile_estimate(sorted, tables);
  FitResult out;
  out.params = from_s0(est.s0);
  out.method = FitMethod::quantile;
  out.n_obs = data.size();
  out.converged = true;
  out.table_clamped = est.clamped;
  if (est.clamped) out.notes.emplace_back("quantile ratios outside the McCulloch tables; clamped to the table edge");
  return out;
}

FitResult fit_quantile(std::span<const double> data) {
  return fit_quantile(data, default_mcculloch_tables());
}

}  // namespace stablefit
