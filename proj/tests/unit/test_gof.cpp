#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "stablefit/density.hpp"
#include "stablefit/errors.hpp"
#include "stablefit/gof.hpp"
#include "stablefit/sampling.hpp"

using namespace stablefit;

TEST_SUITE("gof") {
  TEST_CASE("K-S statistic examples") {
    const std::vector<double> one{0.0};
    CHECK(ks_statistic(one, [](double) { return 0.5; }) == 0.5);
    const int n = 40;
    std::vector<double> u;
    for (int i = 1; i <= n; ++i) u.push_back((i - 0.5) / n);
    std::reverse(u.begin(), u.end());
    CHECK(ks_statistic(u, [](double x) { return x; }) == doctest::Approx(0.5 / n).epsilon(1e-14));
    CHECK_THROWS_AS(ks_statistic(one, [](double) { return 1.5; }), DomainError);
    CHECK_THROWS_AS(ks_statistic(one, [](double) { return NAN; }), DomainError);
    CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, [](double) { return 0.5; }), InsufficientDataError);
  }

  TEST_CASE("probability-integral invariance") {
    const StableParams p{1.3, 0.2, 1.0, 0.0};
    const auto x = sample(p, 500, 2);
    auto F = [&](double v) { return cdf(p, v); };
    std::vector<double> u;
    for (double v : x) u.push_back(F(v));
    CHECK(ks_statistic(x, F) == doctest::Approx(ks_statistic(u, [](double v) { return v; })).epsilon(1e-12));
  }

  TEST_CASE("p-value examples") {
    CHECK(ks_p_value(0.0, 100) == 1.0);
    CHECK(ks_p_value(0.9, 100) == 0.0);
    CHECK(std::abs(ks_p_value(0.0261, 2187) - 0.0989) < 0.005);
    CHECK(std::abs(ks_p_value(0.0291, 1165) - 0.2725) < 0.01);
    CHECK_THROWS_AS(ks_p_value(1.2, 10), DomainError);
  }

  TEST_CASE("p-value strictly decreasing in D") {
    for (std::size_t n : {10u, 100u, 2187u}) {
      double prev = 2.0;
      for (double d = 0.001; d < 0.6; d += 0.001) {
        const double p = ks_p_value(d, n);
        if (p == 0.0) break;
        // For sqrt(n) D below ~0.25 the Kolmogorov CDF is under half an ulp of 1, so
        // the p-value is exactly 1 in double precision; strictness applies below 1.
        if (p < 1.0) CHECK(p < prev);
        CHECK(p <= prev);
        prev = p;
      }
    }
  }

  TEST_CASE("p-value branches agree at the switch") {
    // sqrt(n) D = 1 is where the theta form hands over to the alternating series.
    const double below = ks_p_value(std::nextafter(0.1, 0.0), 100);
    const double above = ks_p_value(std::nextafter(0.1, 1.0), 100);
    CHECK(below == doctest::Approx(above).epsilon(1e-12));
    CHECK(ks_p_value(0.1, 100) == doctest::Approx(0.26999967167735456).epsilon(1e-12));
  }

  TEST_CASE("critical values") {
    const auto c = ks_critical_values(2187);
    const double expect[] = {0.0229, 0.0262, 0.0290, 0.0348};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(c.values[static_cast<std::size_t>(i)] - expect[i]) <= 1e-4);
    CHECK(std::abs(ks_critical_values(971).values[0] - 0.0343) <= 1e-4);
    CHECK_FALSE(c.small_sample_warning);
    CHECK(ks_critical_values(20).small_sample_warning);
    const auto a = ks_critical_values(2187, CriticalValueMethod::asymptotic);
    const auto b = ks_critical_values(4 * 2187, CriticalValueMethod::asymptotic);
    for (int i = 0; i < 4; ++i) {
      CHECK(b.values[static_cast<std::size_t>(i)] == doctest::Approx(a.values[static_cast<std::size_t>(i)] / 2).epsilon(1e-15));
    }
    for (int i = 0; i < 3; ++i) CHECK(c.values[static_cast<std::size_t>(i)] < c.values[static_cast<std::size_t>(i + 1)]);
  }

  TEST_CASE("decision flags are a pure function of statistic and critical values") {
    const auto c = ks_critical_values(1000);
    for (double d : {0.0, 0.03, c.values[1], 0.045, 0.06}) {
      const auto f = ks_decisions(d, c);
      for (std::size_t i = 0; i < 4; ++i) CHECK(f[i] == (d < c.values[i]));
    }
  }

  TEST_CASE("Jarque-Bera") {
    CHECK(jarque_bera(100, 0.0, 3.0) == 0.0);
    const double jb = jarque_bera(2187, 4.888, 160.27);
    CHECK(std::abs(jb - 2.261e6) / 2.261e6 < 0.005);
    CHECK(jb == doctest::Approx(2.263e6).epsilon(0.002));
  }

  TEST_CASE("Jarque-Bera on Gaussian draws") {
    int below = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto x = sample(StableParams{2, 0, 1, 0}, 100000, seed);
      if (summary_stats(x).jarque_bera < 5.99) ++below;
    }
    CHECK(below >= 45);
  }

  TEST_CASE("compare_distributions ranks the true family first") {
    const StableParams truth{1.4, 0.0, 1.0, 0.0};
    const auto x = sample(truth, 1000, 17);
    FitResult stable;
    stable.params = truth;
    const auto t = fit_student_t(x);
    const auto r = compare_distributions(x, stable, t);
    CHECK(r.n_obs == 1000);
    for (Candidate c : kCandidates) {
      const auto& res = r.result(c);
      CHECK(res.candidate == c);
      CHECK(res.not_rejected == ks_decisions(res.ks.statistic, r.critical));
    }
    CHECK(r.result(Candidate::stable).not_rejected[3]);
    CHECK(r.result(Candidate::stable).ks.p_value > r.result(Candidate::levy).ks.p_value);
    CHECK(r.result(Candidate::levy).ks.statistic > 0.2);
    CHECK(candidate_name(Candidate::student_t) == "student_t");
  }
}
