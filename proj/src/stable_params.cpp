#include "stablefit/stable_params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stablefit/errors.hpp"

namespace stablefit {

namespace {

std::string describe(double v) {
  return std::to_string(v);
}

}  // namespace

void validate(const StableParams& p) {
  if (!(p.alpha > 0.0 && p.alpha <= 2.0)) {
    throw DomainError("alpha", "alpha must satisfy 0 < alpha <= 2, got " + describe(p.alpha));
  }
  if (!(p.beta >= -1.0 && p.beta <= 1.0)) {
    throw DomainError("beta", "beta must satisfy -1 <= beta <= 1, got " + describe(p.beta));
  }
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) {
    throw DomainError("gamma", "gamma must be positive and finite, got " + describe(p.gamma));
  }
  if (!std::isfinite(p.delta)) {
    throw DomainError("delta", "delta must be finite, got " + describe(p.delta));
  }
}

double tan_pi_alpha_half(double alpha) noexcept {
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (alpha == 2.0) return 0.0;
  if (alpha > 1.5) return std::tan(half_pi * (alpha - 2.0));
  if (alpha > 0.5) return -1.0 / std::tan(half_pi * (alpha - 1.0));
  return std::tan(half_pi * alpha);
}

double s0_location_shift(double alpha, double beta, double gamma) noexcept {
  if (beta == 0.0) return 0.0;
  if (is_alpha_one(alpha)) return beta * (2.0 / std::numbers::pi) * gamma * std::log(gamma);
  return beta * gamma * tan_pi_alpha_half(alpha);
}

std::complex<double> char_fn(const StableParams& p, double t) {
  validate(p);
  if (t == 0.0) return {1.0, 0.0};

  const double abs_t = std::abs(t);
  const double sign_t = t > 0.0 ? 1.0 : -1.0;
  const double scaled = p.gamma * abs_t;
  double modulus_log = 0.0;
  double phase = p.delta * t;

  if (is_alpha_one(p.alpha)) {
    modulus_log = -scaled;
    const double log_arg = p.kind == Parameterization::S1 ? std::log(abs_t) : std::log(scaled);
    phase -= scaled * p.beta * (2.0 / std::numbers::pi) * sign_t * log_arg;
  } else {
    const double scaled_pow = std::pow(scaled, p.alpha);
    modulus_log = -scaled_pow;
    const double tpa = tan_pi_alpha_half(p.alpha);
    if (p.kind == Parameterization::S1) {
      phase += scaled_pow * p.beta * tpa * sign_t;
    } else {
      // |gamma t|^(1-alpha) - 1 via expm1 so the bracket stays accurate near alpha = 1.
      const double bracket = std::expm1((1.0 - p.alpha) * std::log(scaled));
      phase -= scaled_pow * p.beta * tpa * sign_t * bracket;
    }
  }
  return std::polar(std::exp(modulus_log), phase);
}

StableParams to_s0(const StableParams& p) {
  validate(p);
  if (p.kind == Parameterization::S0) return p;
  StableParams out = p;
  out.delta = p.delta + s0_location_shift(p.alpha, p.beta, p.gamma);
  out.kind = Parameterization::S0;
  return out;
}

StableParams from_s0(const StableParams& p) {
  validate(p);
  if (p.kind == Parameterization::S1) return p;
  StableParams out = p;
  out.delta = p.delta - s0_location_shift(p.alpha, p.beta, p.gamma);
  out.kind = Parameterization::S1;
  return out;
}

}  // namespace stablefit
