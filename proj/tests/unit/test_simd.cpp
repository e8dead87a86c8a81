#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "stablefit/errors.hpp"
#include "stablefit/sampling.hpp"
#include "stablefit/simd/kernels.hpp"

using namespace stablefit;
using namespace stablefit::simd;

namespace {

// Lengths that exercise the vector body and every remainder.
const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 17, 1000, 4099};

std::vector<double> heavy(std::size_t n, std::uint64_t seed) {
  if (n == 0) return {};
  return sample(StableParams{1.1, 0.3, 1.0, 0.0}, n, seed);
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("scalar variant is always available and selectable") {
    CHECK(isa_available(Isa::scalar));
    const Isa before = active_isa();
    set_active_isa(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
    set_active_isa(before);
    CHECK(isa_name(Isa::avx2) == "avx2");
  }

#ifdef STABLEFIT_HAVE_AVX2_KERNELS
  TEST_CASE("AVX2 kernels match the scalar reference") {
    if (!isa_available(Isa::avx2)) {
      MESSAGE("CPU lacks AVX2/FMA; equivalence not exercised");
      return;
    }
    const auto& s = detail::scalar_kernels();
    const auto& v = detail::avx2_kernels();
    for (std::size_t n : kLengths) {
      CAPTURE(n);
      const auto x = heavy(n, 100 + n);

      const auto ms = s.moment_sums(x, 0.3);
      const auto mv = v.moment_sums(x, 0.3);
      CHECK(rel(ms.d1, mv.d1) < 1e-12);
      CHECK(rel(ms.d2, mv.d2) < 1e-12);
      CHECK(rel(ms.d3, mv.d3) < 1e-12);
      CHECK(rel(ms.d4, mv.d4) < 1e-12);

      if (n > 0) {
        std::vector<double> f(n);
        std::mt19937_64 g(n);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& y : f) y = u(g);
        std::sort(f.begin(), f.end());
        CHECK(s.ks_sup_deviation(f) == v.ks_sup_deviation(f));
      }

      for (double t : {0.1, 1.0, 37.5}) {
        const auto ts = s.trig_sums(x, t);
        const auto tv = v.trig_sums(x, t);
        const double scale = std::max(1.0, static_cast<double>(n));
        CHECK(std::abs(ts.cos_sum - tv.cos_sum) < 1e-13 * scale);
        CHECK(std::abs(ts.sin_sum - tv.sin_sum) < 1e-13 * scale);
      }

      CHECK(rel(s.log1p_quadratic_sum(x, 0.1, 2.0, 0.25), v.log1p_quadratic_sum(x, 0.1, 2.0, 0.25)) < 1e-13);

      // A smooth table over the data range.
      const double h = 0.01;
      std::vector<double> table;
      double umin = 0, umax = 0;
      for (double y : x) {
        umin = std::min(umin, std::asinh(y));
        umax = std::max(umax, std::asinh(y));
      }
      const double origin = std::floor(umin / h) * h - 3 * h;
      const auto count = static_cast<std::size_t>((umax - origin) / h) + 6;
      for (std::size_t k = 0; k < count; ++k) {
        const double u = origin + static_cast<double>(k) * h;
        table.push_back(-0.5 * u * u - std::log1p(u * u));
      }
      const LogDensityTable tab{table.data(), table.size(), origin, 1.0 / h};
      const double a = s.interp_log_density_sum(x, 0.0, 1.0, tab);
      const double b = v.interp_log_density_sum(x, 0.0, 1.0, tab);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
  }

  TEST_CASE("trig sums fall back to scalar for huge arguments") {
    if (!isa_available(Isa::avx2)) return;
    const std::vector<double> x{1e9, -3e10, 2.5, 1e12, 7.0};
    const auto a = detail::scalar_kernels().trig_sums(x, 1.0);
    const auto b = detail::avx2_kernels().trig_sums(x, 1.0);
    CHECK(a.cos_sum == doctest::Approx(b.cos_sum).epsilon(1e-12));
    CHECK(a.sin_sum == doctest::Approx(b.sin_sum).epsilon(1e-12));
  }
#endif

  TEST_CASE("dispatch reports unavailable variants") {
    if (!isa_available(Isa::avx2)) CHECK_THROWS_AS(set_active_isa(Isa::avx2), DomainError);
  }

  TEST_CASE("reference kernels against direct formulas") {
    const std::vector<double> x{1.0, 2.0, 4.0};
    const auto m = moment_sums(x, 1.0);
    CHECK(m.d1 == doctest::Approx(4.0));
    CHECK(m.d2 == doctest::Approx(10.0));
    CHECK(m.d3 == doctest::Approx(28.0));
    CHECK(m.d4 == doctest::Approx(82.0));
    const std::vector<double> f{0.1, 0.5, 0.6};
    // max over i of (i+1)/3 - F_i and F_i - i/3
    CHECK(ks_sup_deviation(f) == doctest::Approx(0.4));
    const auto t = trig_sums(x, 0.5);
    CHECK(t.cos_sum == doctest::Approx(std::cos(0.5) + std::cos(1.0) + std::cos(2.0)));
    CHECK(log1p_quadratic_sum(x, 1.0, 1.0, 1.0) == doctest::Approx(std::log(2.0) + std::log(10.0)));
  }
}
