// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "stablefit/data_io.hpp"
#include "stablefit/density.hpp"
#include "stablefit/estimation.hpp"
#include "stablefit/gof.hpp"
#include "stablefit/quadrature.hpp"
#include "stablefit/sampling.hpp"

using namespace stablefit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  const char* name;
  double budget_seconds;  // 0: no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// ---- closed forms --------------------------------------------------------------------

Outcome closed_form_agreement() {
  EvalOptions generic;
  generic.method = DensityMethod::integral;
  constexpr double kTol = 1e-8;
  const std::array<double, 3> gammas{0.5, 1.0, 2.5};
  const std::array<double, 4> deltas{-1.0, 0.0, 0.7, 3.0};

  struct Family {
    const char* name;
    double alpha;
    double beta;
    double (*pdf)(double, double, double) noexcept;
    double (*cdf)(double, double, double) noexcept;
    bool one_sided;
  };
  const std::array<Family, 3> families{{
      {"Gaussian", 2.0, 0.0, closed_form::gaussian_pdf, closed_form::gaussian_cdf, false},
      {"Cauchy", 1.0, 0.0, closed_form::cauchy_pdf, closed_form::cauchy_cdf, false},
      {"Levy", 0.5, 1.0, closed_form::levy_pdf, closed_form::levy_cdf, true},
  }};

  bool pass = true;
  std::string detail;
  for (const auto& fam : families) {
    double worst_pdf = 0.0;
    double worst_cdf = 0.0;
    for (int i = 0; i < 30; ++i) {
      const double g = gammas[static_cast<std::size_t>(i) % gammas.size()];
      const double d = deltas[static_cast<std::size_t>(i) % deltas.size()];
      // Offsets cover [-10, 10] scale units (Levy: (0, 10], its support).
      const double k = fam.one_sided ? 10.0 * (i + 1) / 30.0 : -10.0 + 20.0 * i / 29.0;
      const double x = d + k * g;
      const StableParams p{fam.alpha, fam.beta, g, d};
      worst_pdf = std::max(worst_pdf, rel_err(pdf(p, x, generic), fam.pdf(x, g, d)));
      worst_cdf = std::max(worst_cdf, std::abs(cdf(p, x, generic) - fam.cdf(x, g, d)));
    }
    pass = pass && worst_pdf <= kTol && worst_cdf <= kTol;
    detail += fmt("%s pdf rel %.1e cdf abs %.1e; ", fam.name, worst_pdf, worst_cdf);
  }
  return {pass, detail + "tol 1e-8, 30 pairs each"};
}

// ---- normalization -------------------------------------------------------------------

Outcome normalization() {
  constexpr double kTail = 1e-6;
  double worst = 0.0;
  std::string where;
  for (double a : {0.6, 1.0, 1.3, 1.7, 2.0}) {
    for (double b : {-0.9, 0.0, 0.9}) {
      const StableParams p{a, b, 1.0, 0.0};
      std::vector<double> bp;
      for (double q : {kTail, 1e-4, 1e-2, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 1 - 1e-4, 1 - kTail}) {
        bp.push_back(quantile(p, q));
      }
      std::sort(bp.begin(), bp.end());
      QuadratureOptions qo{1e-13, 1e-10, 2000};
      const auto body = integrate([&](double x) { return pdf(p, x); }, std::span<const double>(bp), qo);
      double tails = 0.0;
      if (a == 2.0) {
        tails = closed_form::gaussian_cdf(bp.front(), 1.0, 0.0) + 1.0 - closed_form::gaussian_cdf(bp.back(), 1.0, 0.0);
      } else {
        tails = paretian_tail_mass(p, bp.front()) + paretian_tail_mass(p, bp.back());
      }
      const double err = std::abs(body.value + tails - 1.0);
      if (err > worst) {
        worst = err;
        where = fmt("(%.1f, %.1f)", a, b);
      }
    }
  }
  return {worst <= 1e-5, fmt("max |mass - 1| = %.2e at %s over 15 cases, tol 1e-5", worst, where.c_str())};
}

// ---- estimation ----------------------------------------------------------------------

constexpr StableParams kHeavyTailed{1.2, 0.1, 0.015, 0.0025};
constexpr int kRecoverySeeds = 5;

struct RecoveryRun {
  FitResult mle;
  FitResult quantile;
  FitResult ecf;
};

const std::vector<RecoveryRun>& recovery_runs() {
  static const std::vector<RecoveryRun> runs = [] {
    std::vector<RecoveryRun> r;
    for (int s = 1; s <= kRecoverySeeds; ++s) {
      const auto x = sample(kHeavyTailed, 100000, static_cast<std::uint64_t>(s));
      r.push_back({fit_mle(x), fit_quantile(x), fit_ecf(x)});
    }
    return r;
  }();
  return runs;
}

Outcome estimator_recovery() {
  const auto& runs = recovery_runs();
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& m = runs[i].mle.params;
    const auto& se = runs[i].mle.std_errors;
    const bool mle_ok = std::abs(m.alpha - kHeavyTailed.alpha) <= 0.03 &&
                        std::abs(m.beta - kHeavyTailed.beta) <= 0.05 &&
                        std::abs(m.gamma / kHeavyTailed.gamma - 1.0) <= 0.03 && se &&
                        std::abs(m.delta - kHeavyTailed.delta) <= 3.0 * se->delta;
    const bool q_ok = std::abs(runs[i].quantile.params.alpha - kHeavyTailed.alpha) <= 0.08;
    const bool e_ok = std::abs(runs[i].ecf.params.alpha - kHeavyTailed.alpha) <= 0.08;
    pass = pass && mle_ok && q_ok && e_ok;
    detail += fmt("seed %zu: ML (%.3f, %.3f, %.5f, %.5f)%s q %.3f e %.3f; ", i + 1, m.alpha, m.beta, m.gamma,
                  m.delta, se ? fmt(" se_d %.5f", se->delta).c_str() : " no se", runs[i].quantile.params.alpha,
                  runs[i].ecf.params.alpha);
  }
  return {pass, detail + "n = 1e5"};
}

Outcome method_agreement() {
  const auto& runs = recovery_runs();
  int agree = 0;
  double widest = 0.0;
  for (const auto& r : runs) {
    const std::array<double, 3> a{r.mle.params.alpha, r.quantile.params.alpha, r.ecf.params.alpha};
    const double spread = *std::max_element(a.begin(), a.end()) - *std::min_element(a.begin(), a.end());
    widest = std::max(widest, spread);
    if (spread <= 0.1) ++agree;
  }
  return {agree >= 4, fmt("alpha estimates within 0.1 in %d of %d seeds (widest spread %.3f), need 4", agree,
                          kRecoverySeeds, widest)};
}

// ---- K-S and Jarque-Bera --------------------------------------------------------------

Outcome ks_critical() {
  const auto c2187 = ks_critical_values(2187).values;
  const std::array<double, 4> want{0.0229, 0.0262, 0.0290, 0.0348};
  bool pass = true;
  for (std::size_t i = 0; i < 4; ++i) pass = pass && std::abs(c2187[i] - want[i]) <= 1e-4;
  const double c971 = ks_critical_values(971).values[0];
  pass = pass && std::abs(c971 - 0.0343) <= 1e-4;
  return {pass, fmt("n=2187: %.4f %.4f %.4f %.4f; n=971 20%%: %.4f; tol 1e-4", c2187[0], c2187[1], c2187[2],
                    c2187[3], c971)};
}

Outcome ks_p_values() {
  const double a = ks_p_value(0.0261, 2187);
  const double b = ks_p_value(0.0291, 1165);
  return {std::abs(a - 0.0989) <= 0.005 && std::abs(b - 0.2725) <= 0.01,
          fmt("p(0.0261, 2187) = %.4f vs 0.0989 (tol 0.005); p(0.0291, 1165) = %.4f vs 0.2725 (tol 0.01)", a, b)};
}

Outcome jarque_bera_consistency() {
  const double jb = jarque_bera(2187, 4.888, 160.27);
  const double err = rel_err(jb, 2.261e6);
  return {err <= 0.005, fmt("JB = %.5g vs 2.261e6, rel err %.2e, tol 5e-3", jb, err)};
}

Outcome ks_calibration() {
  const StableParams null{1.5, 0.3, 1.0, 0.0};
  constexpr std::size_t n = 1000;
  constexpr int seeds = 1000;
  const double crit = ks_critical_values(n).values[2];  // 5%
  const SeededRng parent(0x5eed);
  int rejected = 0;
  for (int s = 0; s < seeds; ++s) {
    SeededRng rng = parent.child(static_cast<std::uint64_t>(s));
    const auto x = sample(null, n, rng);
    const double d = ks_statistic(x, [&](double v) { return cdf(null, v); });
    if (d >= crit) ++rejected;
  }
  const double rate = static_cast<double>(rejected) / seeds;
  return {rate >= 0.03 && rate <= 0.07,
          fmt("5%% rejection rate %.3f over %d seeds, n = %zu, need [0.03, 0.07]", rate, seeds, n)};
}

Outcome sampler_cdf() {
  bool pass = true;
  double lowest = 1.0;
  std::string where;
  std::uint64_t seed = 7000;
  for (double a : {0.8, 1.0, 1.2, 1.5, 1.9}) {
    for (double b : {-0.5, 0.0, 0.5}) {
      const StableParams p{a, b, 1.0, 0.0};
      const auto x = sample(p, 100000, seed++);
      const auto r = ks_test(x, [&](double v) { return cdf(p, v); });
      pass = pass && r.p_value >= 0.01;
      if (r.p_value < lowest) {
        lowest = r.p_value;
        where = fmt("(%.1f, %.1f)", a, b);
      }
    }
  }
  return {pass, fmt("lowest p-value %.3f at %s over 15 cases, n = 1e5, level 0.01", lowest, where.c_str())};
}

Outcome distribution_ranking() {
  constexpr std::size_t n = 2000;
  constexpr std::size_t contaminated = n / 20;
  constexpr int seeds = 20;
  const StableParams gaussian{2.0, 0.0, kHeavyTailed.gamma, kHeavyTailed.delta};
  int stable_over_levy = 0;
  int stable_over_t = 0;
  int stable_over_cauchy = 0;
  for (int s = 0; s < seeds; ++s) {
    SeededRng rng(static_cast<std::uint64_t>(9000 + s));
    auto x = sample(kHeavyTailed, n, rng);
    // Draws are i.i.d., so replacing a fixed block is a 5% mixture.
    const auto g = sample(gaussian, contaminated, rng);
    std::copy(g.begin(), g.end(), x.begin());
    const auto mle = fit_mle(x);
    const auto t = fit_student_t(x);
    const auto report = compare_distributions(x, mle, t);
    const double ps = report.result(Candidate::stable).ks.p_value;
    if (ps > report.result(Candidate::levy).ks.p_value) ++stable_over_levy;
    if (ps >= report.result(Candidate::student_t).ks.p_value) ++stable_over_t;
    if (ps >= report.result(Candidate::cauchy).ks.p_value) ++stable_over_cauchy;
  }
  const bool pass = stable_over_levy == seeds && stable_over_t * 10 >= seeds * 7;
  return {pass, fmt("stable > Levy in %d/%d, stable >= Student-t in %d/%d (need 14), stable >= Cauchy in %d/%d",
                    stable_over_levy, seeds, stable_over_t, seeds, stable_over_cauchy, seeds)};
}

// ---- CLI -----------------------------------------------------------------------------

Outcome cli_golden() {
  const std::string csv = std::string(STABLEFIT_SOURCE_DIR) + "/data/sample_prices_synthetic.csv";
  bool pass = true;
  std::string detail;
  for (const char* cmd : {"summary", "fit", "gof"}) {
    std::ifstream in(std::string(STABLEFIT_SOURCE_DIR) + "/tests/golden/" + cmd + ".txt", std::ios::binary);
    const std::string want((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::ostringstream out;
    std::ostringstream err;
    const char* argv[] = {"stablefit", cmd, "--input", csv.c_str()};
    const int status = cli::run(4, argv, out, err);
    const bool same = status == 0 && !want.empty() && out.str() == want;
    pass = pass && same;
    detail += fmt("%s %s; ", cmd, same ? "identical" : "differs");
  }
  return {pass, detail + "byte-exact"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"closed-form agreement", 10, closed_form_agreement},
      {"normalization", 60, normalization},
      {"estimator recovery", 600, estimator_recovery},
      {"method agreement", 0, method_agreement},
      {"K-S critical values", 1, ks_critical},
      {"K-S p-value cross-check", 1, ks_p_values},
      {"Jarque-Bera consistency", 1, jarque_bera_consistency},
      {"K-S calibration", 300, ks_calibration},
      {"sampler/CDF cross-validation", 300, sampler_cdf},
      {"distribution ranking", 600, distribution_ranking},
      {"CLI golden files", 0, cli_golden},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_seconds == 0 || secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s  %s: %s [%.1f s%s]\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                c.budget_seconds == 0 ? ""
                : in_time            ? fmt(", budget %g s", c.budget_seconds).c_str()
                                     : fmt(", over budget %g s", c.budget_seconds).c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
