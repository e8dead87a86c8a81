#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>

#include "fit_internal.hpp"
#include "stablefit/errors.hpp"
#include "stablefit/estimation.hpp"

namespace stablefit {

namespace {

// Order statistic interpolation at a 1-based position, clamped to the sample range.
double at_position(std::span<const double> sorted, double pos) {
  const double n = static_cast<double>(sorted.size());
  if (pos <= 1.0) return sorted.front();
  if (pos >= n) return sorted.back();
  const double fl = std::floor(pos);
  const double f = pos - fl;
  const auto k = static_cast<std::size_t>(fl) - 1;
  return (1.0 - f) * sorted[k] + f * sorted[k + 1];
}

}  // namespace

std::string_view method_name(FitMethod m) noexcept {
  switch (m) {
    case FitMethod::mle:
      return "mle";
    case FitMethod::quantile:
      return "quantile";
    case FitMethod::ecf:
      return "ecf";
  }
  return "";
}

double corrected_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InsufficientDataError(0, 1, "quantile");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p", "quantile order must lie in [0, 1]");
  return at_position(sorted, p * static_cast<double>(sorted.size()) + 0.5);
}

namespace detail {

std::vector<double> checked_sorted(std::span<const double> data, std::size_t min_n, const std::string& what) {
  if (data.size() < min_n) throw InsufficientDataError(data.size(), min_n, what);
  for (double v : data) {
    if (!std::isfinite(v)) throw DomainError("data", what + ": data must be finite");
  }
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw DegenerateDataError(what + ": all observations are equal");
  return sorted;
}

FiveQuantiles five_quantiles(std::span<const double> sorted) {
  const double n = static_cast<double>(sorted.size());
  const double pos05 = 0.05 * n + 0.5;
  const double pos25 = 0.25 * n + 0.5;
  return {at_position(sorted, pos05), at_position(sorted, pos25), at_position(sorted, 0.5 * n + 0.5),
          at_position(sorted, (n + 1.0) - pos25), at_position(sorted, (n + 1.0) - pos05)};
}

QuantileEstimate quantile_estimate(std::span<const double> sorted, const McCullochTables& tables) {
  const FiveQuantiles q = five_quantiles(sorted);
  const double spread = q.q95 - q.q05;
  const double iqr = q.q75 - q.q25;
  if (!(iqr > 0.0) || !(spread > 0.0)) {
    throw DegenerateDataError("quantile estimate: interquartile range is zero");
  }
  const double nu_alpha = spread / iqr;
  const double nu_beta = (q.q95 + q.q05 - 2.0 * q.q50) / spread;
  const TableLookup ab = lookup_alpha_beta(tables, nu_alpha, nu_beta);
  const double c = iqr / lookup_nu_c(tables, ab.alpha, ab.beta);
  const double zeta = q.q50 + c * lookup_nu_zeta(tables, ab.alpha, ab.beta);
  QuantileEstimate out;
  out.s0 = StableParams{std::max(ab.alpha, 1e-3), ab.beta, c, zeta, Parameterization::S0};
  out.clamped = ab.clamped;
  return out;
}

namespace {

struct Callback {
  const std::function<double(const Eigen::VectorXd&)>* f;
  Eigen::VectorXd scratch;
};

double gsl_adapter(const gsl_vector* v, void* params) {
  auto* cb = static_cast<Callback*>(params);
  for (std::size_t i = 0; i < v->size; ++i) cb->scratch[static_cast<Eigen::Index>(i)] = gsl_vector_get(v, i);
  const double r = (*cb->f)(cb->scratch);
  return std::isfinite(r) ? r : 1e300;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& step, double size_tol, int max_iter) {
  // GSL's default handler aborts the process; failures are reported through return codes.
  static const bool handler_off = (gsl_set_error_handler_off(), true);
  (void)handler_off;
  const auto dim = static_cast<std::size_t>(x0.size());
  Callback cb{&f, Eigen::VectorXd(x0.size())};
  gsl_multimin_function fn{&gsl_adapter, dim, &cb};
  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* ss = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    gsl_vector_set(x, i, x0[static_cast<Eigen::Index>(i)]);
    gsl_vector_set(ss, i, step[static_cast<Eigen::Index>(i)]);
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  NelderMeadResult out;
  for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
  }
  out.x.resize(x0.size());
  for (std::size_t i = 0; i < dim; ++i) out.x[static_cast<Eigen::Index>(i)] = gsl_vector_get(s->x, i);
  out.value = s->fval;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(x);
  gsl_vector_free(ss);
  return out;
}

}  // namespace detail

}  // namespace stablefit
