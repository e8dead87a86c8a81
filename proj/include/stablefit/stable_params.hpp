#pragma once

#include <complex>

namespace stablefit {

/// Which convention the location parameter refers to.
///
/// S1 is the Samorodnitsky-Taqqu form, X ~ S(alpha, beta, gamma, delta), used for every
/// user-facing estimate. S0 is Nolan's continuous form: it differs only in delta and is
/// jointly continuous in all four parameters, including across alpha = 1.
enum class Parameterization { S1, S0 };

/// The four-parameter alpha-stable law.
struct StableParams {
  double alpha = 2.0;  ///< tail index, 0 < alpha <= 2
  double beta = 0.0;   ///< skewness, -1 <= beta <= 1
  double gamma = 1.0;  ///< scale, > 0
  double delta = 0.0;  ///< location under `kind`
  Parameterization kind = Parameterization::S1;

  friend bool operator==(const StableParams&, const StableParams&) = default;
};

/// |alpha - 1| below this selects the alpha = 1 branch everywhere.
inline constexpr double kAlphaOneTolerance = 1e-8;

inline bool is_alpha_one(double alpha) noexcept {
  return alpha - 1.0 < kAlphaOneTolerance && 1.0 - alpha < kAlphaOneTolerance;
}

/// Throws DomainError naming the first violated bound.
void validate(const StableParams& params);

/// tan(pi * alpha / 2), evaluated through the nearest exact reference point
/// (0, 1 or 2) so that it keeps full relative accuracy near alpha = 1 and alpha = 2.
/// Returns exactly 0 at alpha = 2.
double tan_pi_alpha_half(double alpha) noexcept;

/// Location shift between parameterizations: delta_S0 = delta_S1 + s0_location_shift(...).
double s0_location_shift(double alpha, double beta, double gamma) noexcept;

/// E[exp(i t X)] for either parameterization.
std::complex<double> char_fn(const StableParams& params, double t);

/// Convert to S0 / S1. Parameters already in the target form are returned unchanged.
StableParams to_s0(const StableParams& params);
StableParams from_s0(const StableParams& params);

}  // namespace stablefit
