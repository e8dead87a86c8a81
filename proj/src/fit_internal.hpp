#pragma once

// Helpers shared by the estimators. Not installed.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stablefit/mcculloch.hpp"
#include "stablefit/stable_params.hpp"

namespace stablefit::detail {

/// Throws InsufficientDataError / DomainError (non-finite) / DegenerateDataError
/// (all equal) and returns an ascending copy.
std::vector<double> checked_sorted(std::span<const double> data, std::size_t min_n, const std::string& what);

/// The five McCulloch quantiles. The 95/75 ones are taken at positions mirrored from the
/// 5/25 ones, so an exactly symmetric sample gives exactly symmetric quantiles.
struct FiveQuantiles {
  double q05, q25, q50, q75, q95;
};
FiveQuantiles five_quantiles(std::span<const double> sorted);

/// The McCulloch estimate as S0 parameters, plus the clamp flag.
struct QuantileEstimate {
  StableParams s0;
  bool clamped = false;
};
QuantileEstimate quantile_estimate(std::span<const double> sorted, const McCullochTables& tables);

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimize f by the Nelder-Mead simplex (GSL nmsimplex2) until the simplex size falls
/// below size_tol or max_iter is reached.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& step, double size_tol, int max_iter);

}  // namespace stablefit::detail
