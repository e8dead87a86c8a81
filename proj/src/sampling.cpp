#include "stablefit/sampling.hpp"

#include <cmath>
#include <numbers>

#include "stablefit/errors.hpp"

namespace stablefit {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Standardized S1 draw (gamma = 1, delta = 0) from a uniform angle v in (-pi/2, pi/2)
// and an exponential w.
double cms_standard(double alpha, double beta, double v, double w) {
  if (is_alpha_one(alpha)) {
    const double bv = kHalfPi + beta * v;
    return (bv * std::tan(v) - beta * std::log(kHalfPi * w * std::cos(v) / bv)) / kHalfPi;
  }
  const double tpa = beta * tan_pi_alpha_half(alpha);
  const double b = std::atan(tpa) / alpha;
  const double s = std::pow(1.0 + tpa * tpa, 1.0 / (2.0 * alpha));
  const double avb = alpha * (v + b);
  return s * std::sin(avb) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - avb) / w, (1.0 - alpha) / alpha);
}

double draw(const StableParams& s1, SeededRng& rng) {
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();
  const double x = cms_standard(s1.alpha, s1.beta, v, w);
  if (is_alpha_one(s1.alpha)) {
    return s1.gamma * x + s1.beta * s1.gamma * std::log(s1.gamma) / kHalfPi + s1.delta;
  }
  return s1.gamma * x + s1.delta;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeededRng SeededRng::child(std::uint64_t index) const {
  return SeededRng(splitmix64(seed_ ^ splitmix64(index)));
}

double sample_one(const StableParams& params, SeededRng& rng) {
  return draw(from_s0(params), rng);
}

std::vector<double> sample(const StableParams& params, std::size_t n, SeededRng& rng) {
  if (n == 0) throw DomainError("n", "sample size must be at least 1");
  const StableParams s1 = from_s0(params);
  std::vector<double> out(n);
  for (auto& x : out) x = draw(s1, rng);
  return out;
}

std::vector<double> sample(const StableParams& params, std::size_t n, std::uint64_t seed) {
  SeededRng rng(seed);
  return sample(params, n, rng);
}

}  // namespace stablefit
