#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <utility>

#include "fit_internal.hpp"
#include "stablefit/errors.hpp"
#include "stablefit/estimation.hpp"
#include "stablefit/simd/kernels.hpp"

namespace stablefit {

namespace {

constexpr double kAlphaMin = 0.1;
constexpr double kLogFloor = -690.0;  // log of the smallest density kept in the table
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// log f of the standardized S0 law tabulated on u = asinh(z) at nodes u_k = k h, filled
// lazily for the nodes the data actually touch.
class LogDensityTable {
 public:
  LogDensityTable(double alpha, double beta, double h, const EvalOptions& eval)
      : alpha_(alpha), beta_(beta), h_(h), eval_(eval) {}

  // Fill every node any observation's interpolation stencil can reach under (loc, scale).
  void prepare(std::span<const double> sorted, double loc, double scale) {
    std::size_t i = 0;
    while (i < sorted.size()) {
      const double u = std::asinh((sorted[i] - loc) / scale);
      const auto k = static_cast<long>(std::floor(u / h_));
      // One spare node on each side absorbs rounding differences between asinh variants.
      ensure(k - 2, k + 3);
      const double next = loc + scale * std::sinh(static_cast<double>(k + 1) * h_);
      auto it = std::lower_bound(sorted.begin() + static_cast<std::ptrdiff_t>(i) + 1, sorted.end(), next);
      i = static_cast<std::size_t>(it - sorted.begin());
    }
  }

  simd::LogDensityTable view() const {
    return {values_.data(), values_.size(), static_cast<double>(first_) * h_, 1.0 / h_};
  }

  // Interpolated g(u) and its first two u-derivatives.
  void eval(double u, double& g, double& gu, double& guu) const {
    const double pos = u / h_;
    const double fl = std::floor(pos);
    const double t = pos - fl;
    const auto base = static_cast<std::size_t>(static_cast<long>(fl) - 1 - first_);
    const double* v = values_.data() + base;
    double w[4];
    simd::detail::lagrange4_weights(t, w);
    g = w[0] * v[0] + w[1] * v[1] + w[2] * v[2] + w[3] * v[3];
    const double t2 = t * t;
    const double d0 = -(3.0 * t2 - 6.0 * t + 2.0) / 6.0;
    const double d1 = (3.0 * t2 - 4.0 * t - 1.0) / 2.0;
    const double d2 = -(3.0 * t2 - 2.0 * t - 2.0) / 2.0;
    const double d3 = (3.0 * t2 - 1.0) / 6.0;
    gu = (d0 * v[0] + d1 * v[1] + d2 * v[2] + d3 * v[3]) / h_;
    guu = (-(t - 1.0) * v[0] + (3.0 * t - 2.0) * v[1] - (3.0 * t - 1.0) * v[2] + t * v[3]) / (h_ * h_);
  }

 private:
  void ensure(long lo, long hi) {
    if (values_.empty()) {
      first_ = lo;
      values_.assign(static_cast<std::size_t>(hi - lo + 1), kNaN);
    }
    if (lo < first_) {
      values_.insert(values_.begin(), static_cast<std::size_t>(first_ - lo), kNaN);
      first_ = lo;
    }
    const long last = first_ + static_cast<long>(values_.size()) - 1;
    if (hi > last) values_.resize(values_.size() + static_cast<std::size_t>(hi - last), kNaN);
    for (long k = lo; k <= hi; ++k) {
      double& v = values_[static_cast<std::size_t>(k - first_)];
      if (std::isnan(v)) {
        const double z = std::sinh(static_cast<double>(k) * h_);
        const double f = pdf(StableParams{alpha_, beta_, 1.0, 0.0, Parameterization::S0}, z, eval_);
        v = f > 0.0 ? std::max(std::log(f), kLogFloor) : kLogFloor;
      }
    }
  }

  double alpha_;
  double beta_;
  double h_;
  EvalOptions eval_;
  long first_ = 0;
  std::vector<double> values_;
};

// Full parameter vector used internally: alpha, beta, s = log gamma, d = S0 location.
struct Point {
  double alpha;
  double beta;
  double s;
  double d;
};

class Likelihood {
 public:
  Likelihood(std::span<const double> sorted, const MleOptions& opts) : x_(sorted), opts_(opts) {}

  LogDensityTable& table(double alpha, double beta) {
    auto key = std::make_pair(alpha, beta);
    auto it = tables_.find(key);
    if (it == tables_.end()) {
      it = tables_.emplace(key, LogDensityTable(alpha, beta, opts_.table_step, opts_.eval)).first;
    }
    return it->second;
  }

  double value(const Point& p) {
    auto& t = table(p.alpha, p.beta);
    const double scale = std::exp(p.s);
    t.prepare(x_, p.d, scale);
    return simd::interp_log_density_sum(x_, p.d, 1.0 / scale, t.view()) - static_cast<double>(x_.size()) * p.s;
  }

  // Maximize over (s, d) with alpha, beta fixed, by Newton steps on the interpolated
  // log-likelihood. Updates s and d in place, returns the maximum.
  double profile(double alpha, double beta, double& s, double& d, bool& converged) {
    auto& t = table(alpha, beta);
    const double n = static_cast<double>(x_.size());
    Point p{alpha, beta, s, d};
    double current = value(p);
    converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      const double scale = std::exp(p.s);
      t.prepare(x_, p.d, scale);
      double sg = 0.0, sgz = 0.0, sh = 0.0, shz = 0.0, shzz = 0.0;
      for (double xi : x_) {
        const double z = (xi - p.d) / scale;
        const double r = std::sqrt(1.0 + z * z);
        double g, gu, guu;
        t.eval(std::asinh(z), g, gu, guu);
        const double gz = gu / r;
        const double gzz = guu / (r * r) - gu * z / (r * r * r);
        sg += gz;
        sgz += gz * z;
        sh += gzz;
        shz += gzz * z;
        shzz += gzz * z * z;
      }
      // Gradient and Hessian in (s, d).
      const double g_s = -sgz - n;
      const double g_d = -sg / scale;
      const double h_ss = shzz + sgz;
      const double h_sd = (shz + sg) / scale;
      const double h_dd = sh / (scale * scale);
      double step_s = 0.0, step_d = 0.0;
      const double det = h_ss * h_dd - h_sd * h_sd;
      if (h_ss < 0.0 && det > 0.0) {
        step_s = -(h_dd * g_s - h_sd * g_d) / det;
        step_d = -(h_ss * g_d - h_sd * g_s) / det;
      } else {
        // Not concave here: scaled gradient step.
        step_s = g_s / (std::abs(h_ss) + n);
        step_d = g_d / (std::abs(h_dd) + n / (scale * scale));
      }
      step_s = std::clamp(step_s, -1.0, 1.0);
      step_d = std::clamp(step_d, -scale, scale);
      double lambda = 1.0;
      Point trial = p;
      double trial_value = current;
      for (int k = 0; k < 40; ++k) {
        trial = Point{alpha, beta, p.s + lambda * step_s, p.d + lambda * step_d};
        trial_value = value(trial);
        if (trial_value >= current) break;
        lambda *= 0.5;
      }
      if (!(trial_value >= current)) {
        converged = true;  // no ascent direction left at interpolation accuracy
        break;
      }
      const double gain = trial_value - current;
      p = trial;
      current = trial_value;
      if (std::abs(lambda * step_s) < 1e-10 && std::abs(lambda * step_d) < 1e-10 * std::exp(p.s)) {
        converged = true;
        break;
      }
      if (gain < 1e-12 * std::max(1.0, std::abs(current))) {
        converged = true;
        break;
      }
    }
    s = p.s;
    d = p.d;
    return current;
  }

  std::size_t size() const { return x_.size(); }

 private:
  std::span<const double> x_;
  const MleOptions& opts_;
  std::map<std::pair<double, double>, LogDensityTable> tables_;
};

// Finite-difference steps in (alpha, beta, s, d) units; d is scaled by gamma.
std::array<double, 4> fd_steps(const Point& p) {
  return {1e-3, 1e-3, 1e-4, 1e-4 * std::exp(p.s)};
}

Point shifted(Point p, int i, double h) {
  switch (i) {
    case 0:
      p.alpha += h;
      break;
    case 1:
      p.beta += h;
      break;
    case 2:
      p.s += h;
      break;
    default:
      p.d += h;
      break;
  }
  return p;
}

struct Derivatives {
  std::vector<int> free;  // coordinates away from the box boundary
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

Derivatives derivatives(Likelihood& lik, const Point& p) {
  const auto h = fd_steps(p);
  Derivatives out;
  if (p.alpha + 2.0 * h[0] <= 2.0 && p.alpha - 2.0 * h[0] >= kAlphaMin) out.free.push_back(0);
  if (std::abs(p.beta) + 2.0 * h[1] <= 1.0) out.free.push_back(1);
  out.free.push_back(2);
  out.free.push_back(3);
  const auto m = static_cast<Eigen::Index>(out.free.size());
  out.grad = Eigen::VectorXd::Zero(m);
  out.hess = Eigen::MatrixXd::Zero(m, m);
  const double f0 = lik.value(p);
  for (Eigen::Index a = 0; a < m; ++a) {
    const int i = out.free[static_cast<std::size_t>(a)];
    const double fp = lik.value(shifted(p, i, h[i]));
    const double fm = lik.value(shifted(p, i, -h[i]));
    out.grad[a] = (fp - fm) / (2.0 * h[i]);
    out.hess(a, a) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (Eigen::Index b = 0; b < a; ++b) {
      const int j = out.free[static_cast<std::size_t>(b)];
      const double fpp = lik.value(shifted(shifted(p, i, h[i]), j, h[j]));
      const double fpm = lik.value(shifted(shifted(p, i, h[i]), j, -h[j]));
      const double fmp = lik.value(shifted(shifted(p, i, -h[i]), j, h[j]));
      const double fmm = lik.value(shifted(shifted(p, i, -h[i]), j, -h[j]));
      out.hess(a, b) = out.hess(b, a) = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
    }
  }
  return out;
}

Point project(Point p) {
  p.alpha = std::clamp(p.alpha, kAlphaMin, 2.0);
  p.beta = std::clamp(p.beta, -1.0, 1.0);
  return p;
}

// Delta-method standard errors of the S1 parameters from the covariance of
// (alpha, beta, s, d).
StandardErrors s1_errors(const Point& p, const Eigen::Matrix4d& cov) {
  const double gamma = std::exp(p.s);
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j(0, 0) = 1.0;
  j(1, 1) = 1.0;
  j(2, 2) = gamma;
  j(3, 3) = 1.0;
  if (is_alpha_one(p.alpha)) {
    const double c = 2.0 / std::numbers::pi;
    j(3, 1) = -c * gamma * p.s;
    j(3, 2) = -p.beta * c * gamma * (p.s + 1.0);
  } else {
    const double tpa = tan_pi_alpha_half(p.alpha);
    j(3, 0) = -p.beta * gamma * (std::numbers::pi / 2.0) * (1.0 + tpa * tpa);
    j(3, 1) = -gamma * tpa;
    j(3, 2) = -p.beta * gamma * tpa;
  }
  const Eigen::Matrix4d c1 = j * cov * j.transpose();
  auto se = [&](int i) { return std::sqrt(std::max(0.0, c1(i, i))); };
  return {se(0), se(1), se(2), se(3)};
}

}  // namespace

double stable_log_likelihood(const StableParams& params, std::span<const double> data, const EvalOptions& opts) {
  double s = 0.0;
  for (double x : data) {
    const double f = pdf(params, x, opts);
    s += f > 0.0 ? std::log(f) : -std::numeric_limits<double>::infinity();
  }
  return s;
}

FitResult fit_mle(std::span<const double> data, const MleOptions& opts) {
  validate(opts.eval);
  if (!(opts.table_step > 0.0 && opts.table_step <= 0.1)) {
    throw DomainError("table_step", "table_step must lie in (0, 0.1]");
  }
  const auto sorted = detail::checked_sorted(data, kMinObsMle, "maximum likelihood");
  const double n = static_cast<double>(sorted.size());

  // Starting point in S0.
  StableParams start;
  if (opts.start) {
    start = to_s0(*opts.start);
  } else if (sorted.size() >= kMinObsQuantile) {
    start = detail::quantile_estimate(sorted, default_mcculloch_tables()).s0;
  } else {
    const double iqr = corrected_quantile(sorted, 0.75) - corrected_quantile(sorted, 0.25);
    start = StableParams{1.5, 0.0, iqr > 0.0 ? iqr / 2.0 : 1.0, corrected_quantile(sorted, 0.5),
                         Parameterization::S0};
  }
  start.alpha = std::clamp(start.alpha, kAlphaMin + 0.05, 1.98);
  start.beta = std::clamp(start.beta, -0.95, 0.95);

  Likelihood lik(sorted, opts);
  double s = std::log(start.gamma);
  double d = start.delta;
  bool inner_ok = true;

  // Outer search over (alpha, beta); (s, d) profiled out. Points outside the box are
  // evaluated at their projection with a quadratic penalty.
  auto objective = [&](const Eigen::VectorXd& v) {
    const double a = std::clamp(v[0], kAlphaMin, 2.0);
    const double b = std::clamp(v[1], -1.0, 1.0);
    const double out2 = (v[0] - a) * (v[0] - a) + (v[1] - b) * (v[1] - b);
    double ss = s, dd = d;
    bool ok = true;
    const double ll = lik.profile(a, b, ss, dd, ok);
    s = ss;
    d = dd;
    inner_ok = inner_ok && ok;
    return -ll / n + 10.0 * out2;
  };
  Eigen::VectorXd x0(2), step(2);
  x0 << start.alpha, start.beta;
  step << 0.1, 0.2;
  const auto nm = detail::nelder_mead(objective, x0, step, 1e-5, opts.max_outer_iterations);

  Point best = project(Point{nm.x[0], nm.x[1], s, d});
  {
    bool ok = true;
    lik.profile(best.alpha, best.beta, best.s, best.d, ok);
  }
  double best_value = lik.value(best);

  // Newton polish on all free coordinates.
  Derivatives der = derivatives(lik, best);
  for (int iter = 0; iter < 3; ++iter) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(-der.hess);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) break;
    const Eigen::VectorXd delta = ldlt.solve(der.grad);
    Point trial = best;
    for (std::size_t a = 0; a < der.free.size(); ++a) {
      trial = shifted(trial, der.free[a], delta[static_cast<Eigen::Index>(a)]);
    }
    trial = project(trial);
    const double v = lik.value(trial);
    if (!(v > best_value)) break;
    best = trial;
    best_value = v;
    der = derivatives(lik, best);
    if (delta.norm() < 1e-8) break;
  }

  FitResult out;
  out.method = FitMethod::mle;
  out.n_obs = data.size();
  const StableParams s0{best.alpha, best.beta, std::exp(best.s), best.d, Parameterization::S0};
  out.params = from_s0(s0);

  bool information_ok = false;
  if (der.free.size() == 4) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(-der.hess);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      const Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(4, 4));
      Eigen::Matrix4d c4 = cov;
      out.std_errors = s1_errors(best, c4);
      information_ok = true;
    }
  } else {
    out.notes.emplace_back("estimate on the boundary of the parameter box; standard errors not reported");
  }
  if (der.free.size() == 4 && !information_ok) {
    out.notes.emplace_back("observed information not positive definite; standard errors not reported");
  }
  out.converged = nm.converged && inner_ok && (information_ok || der.free.size() < 4);
  if (!nm.converged) out.notes.emplace_back("simplex search hit its iteration limit");
  out.log_likelihood = opts.exact_final_loglik ? stable_log_likelihood(out.params, data, opts.eval) : best_value;
  if (!std::isfinite(*out.log_likelihood) && opts.exact_final_loglik) {
    out.notes.emplace_back("some observations have zero density under the fitted law");
  }
  return out;
}

}  // namespace stablefit
