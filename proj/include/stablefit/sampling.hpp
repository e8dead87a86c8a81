#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "stablefit/stable_params.hpp"

namespace stablefit {

/// Seeded source of randomness for the sampler.
///
/// The generator is std::mt19937_64 (its output sequence is fixed by the C++ standard),
/// seeded with the 64-bit seed directly. Uniforms are built from the top 53 bits of each
/// word, so draws are bit-identical on every conforming platform. One object per thread:
/// use child() to derive independent streams.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard exponential, -log of an open uniform.
  double exponential() { return -std::log(uniform_open()); }

  /// Generator for stream `index`, seeded with splitmix64(seed ^ splitmix64(index)).
  /// Children of the same parent with different indices are independent streams.
  SeededRng child(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// One step of the splitmix64 mixer (Steele, Lea and Flood).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// n i.i.d. draws by the Chambers-Mallows-Stuck transformation. Parameters of either
/// kind are accepted; draws follow the law they describe.
std::vector<double> sample(const StableParams& params, std::size_t n, SeededRng& rng);
std::vector<double> sample(const StableParams& params, std::size_t n, std::uint64_t seed);

/// A single draw.
double sample_one(const StableParams& params, SeededRng& rng);

}  // namespace stablefit
