#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stablefit/density.hpp"
#include "stablefit/errors.hpp"
#include "stablefit/gof.hpp"
#include "stablefit/sampling.hpp"

using namespace stablefit;

namespace {

double variance(const std::vector<double>& x) {
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double median(std::vector<double> x) {
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(x.size() / 2), x.end());
  return x[x.size() / 2];
}

}  // namespace

TEST_SUITE("sampling") {
  TEST_CASE("Gaussian member has variance 2 gamma^2") {
    const auto x = sample(StableParams{2, 0, 1, 0}, 100000, 11);
    CHECK(variance(x) == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("Cauchy median is delta") {
    const auto x = sample(StableParams{1, 0, 1, 5}, 100000, 12);
    CHECK(std::abs(median(x) - 5.0) < 0.05);
  }

  TEST_CASE("same seed, same draws") {
    const StableParams p{1.3, -0.4, 2.0, 1.0};
    CHECK(sample(p, 1000, 99) == sample(p, 1000, 99));
    CHECK(sample(p, 1000, 99) != sample(p, 1000, 100));
    SeededRng a(5), b(5);
    CHECK(sample(p, 10, a) == sample(p, 10, b));
  }

  TEST_CASE("generator sequence is pinned") {
    // std::mt19937_64 with the default seed 5489 yields 9981545732273789042 as its
    // 10000th output (fixed by the C++ standard).
    SeededRng r(5489);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = r.next();
    CHECK(v == 9981545732273789042ULL);
    SeededRng u(1);
    for (int i = 0; i < 1000; ++i) {
      const double x = u.uniform_open();
      CHECK(x > 0.0);
      CHECK(x < 1.0);
    }
  }

  TEST_CASE("child streams are distinct and reproducible") {
    SeededRng parent(42);
    std::set<std::uint64_t> firsts;
    for (std::uint64_t i = 0; i < 100; ++i) {
      auto c = parent.child(i);
      CHECK(c.seed() == splitmix64(42 ^ splitmix64(i)));
      firsts.insert(c.next());
    }
    CHECK(firsts.size() == 100);
    CHECK(parent.child(3).next() == parent.child(3).next());
  }

  TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(sample(StableParams{2.5, 0, 1, 0}, 10, 1), DomainError);
  }

  TEST_CASE("draws match the CDF on a small grid") {
    for (double a : {0.8, 1.0, 1.5}) {
      for (double b : {-0.5, 0.5}) {
        const StableParams p{a, b, 1.0, 0.0};
        const auto x = sample(p, 2000, 1000 + static_cast<std::uint64_t>(a * 10 + b * 2));
        const auto r = ks_test(x, [&](double v) { return cdf(p, v); });
        CAPTURE(a);
        CAPTURE(b);
        CHECK(r.p_value > 0.001);
      }
    }
  }

  TEST_CASE("S0 parameters draw the S0 law") {
    const StableParams s0{1.2, 0.8, 1.0, 0.0, Parameterization::S0};
    const auto x = sample(s0, 2000, 77);
    const auto r = ks_test(x, [&](double v) { return cdf(s0, v); });
    CHECK(r.p_value > 0.001);
  }

  TEST_CASE("empirical quantiles within three standard errors") {
    const StableParams p{1.5, 0.3, 1.0, 0.0};
    auto x = sample(p, 20000, 5);
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      const double xq = quantile(p, q);
      const double se = std::sqrt(q * (1 - q) / n) / pdf(p, xq);
      const double emp = x[static_cast<std::size_t>(q * n)];
      CHECK(std::abs(emp - xq) < 3 * se);
    }
  }
}
