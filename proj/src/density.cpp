#include "stablefit/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/roots.hpp>

#include "stablefit/errors.hpp"
#include "stablefit/quadrature.hpp"

namespace stablefit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Integrand cut-off below the peak, in units of log(s). e^-50 relative contribution.
constexpr double kLogCut = 50.0;
// Lowest representable offset from an end point used by the root search.
constexpr double kLogFloor = -690.0;

enum class Kernel { density, exp_neg, neg_expm1 };

inline double kernel_value(Kernel k, double log_u) {
  if (log_u == kInf) return k == Kernel::neg_expm1 ? 1.0 : 0.0;
  switch (k) {
    case Kernel::density:
      return std::exp(log_u - std::exp(log_u));
    case Kernel::exp_neg:
      return std::exp(-std::exp(log_u));
    case Kernel::neg_expm1:
      return -std::expm1(-std::exp(log_u));
  }
  return 0.0;
}

// log u(theta) on the integration range (-theta0, pi/2), parameterized by the distances
// phi = theta + theta0 from the left end and psi = pi/2 - theta from the right end.
// Exactly one of the two is small at any point; the caller passes both.
struct ZolotarevIntegrand {
  double alpha;
  double beta;
  bool alpha_one;
  double upper;  // pi/2 + theta0 (or pi for alpha = 1)
  double log_h;  // log of the z-dependent multiplier
  // alpha != 1
  double inv_am1 = 0.0;
  double a_over_am1 = 0.0;
  double log_cos_at0 = 0.0;
  double cos_at0 = 0.0;
  double sin_at0 = 0.0;
  double right_deficit = 0.0;  // pi - alpha * upper

  double log_u(double phi, double psi) const {
    if (alpha_one) {
      // theta = phi - pi/2 = pi/2 - psi.
      const bool left = phi < psi;
      const double cos_theta = left ? std::sin(phi) : std::sin(psi);
      const double tan_theta = left ? -std::cos(phi) / cos_theta : std::cos(psi) / cos_theta;
      const double a = left ? kHalfPi * (1.0 - beta) + beta * phi : kHalfPi * (1.0 + beta) - beta * psi;
      if (a <= 0.0) return -kInf;
      const double log_v = std::log(2.0 / kPi) + std::log(a) - std::log(cos_theta) + a * tan_theta / beta;
      return log_h + log_v;
    }
    double c = 0.0;
    double sin_aphi = 0.0;
    if (psi < phi) {
      // Near the right end both factors vanish when the deficit does; measure the angles
      // from pi so they keep relative accuracy as psi -> 0.
      c = std::sin(right_deficit + (alpha - 1.0) * psi);
      sin_aphi = std::sin(right_deficit + alpha * psi);
    } else {
      const double theta = kHalfPi - psi;
      c = cos_at0 * std::cos((alpha - 1.0) * theta) - sin_at0 * std::sin((alpha - 1.0) * theta);
      sin_aphi = std::sin(alpha * phi);
    }
    if (c <= 0.0) return alpha > 1.0 ? -kInf : kInf;
    if (sin_aphi <= 0.0) return alpha > 1.0 ? kInf : -kInf;
    const double log_v = (log_cos_at0 + std::log(std::sin(psi))) * inv_am1 -
                         a_over_am1 * std::log(sin_aphi) + std::log(c);
    return log_h + log_v;
  }
};

// Integrate kernel(log u) over the range, as described in the header comment of
// integrate_zolotarev. Returns the integral over theta.
struct ZolotarevQuadrature {
  const ZolotarevIntegrand& integrand;
  const EvalOptions& opts;
  double abs_floor;

  // Composite coordinate v: v <= W covers the left half with phi = e^v, v >= W covers the
  // right half with psi = e^(2W - v). Both meet at the midpoint phi = psi = upper / 2.
  double join() const { return std::log(0.5 * integrand.upper); }

  std::pair<double, double> split(double v) const {
    const double w = join();
    if (v <= w) {
      const double s = std::exp(v);
      return {s, integrand.upper - s};
    }
    const double s = std::exp(2.0 * w - v);
    return {integrand.upper - s, s};
  }

  double log_u_at(double v) const {
    auto [phi, psi] = split(v);
    return integrand.log_u(phi, psi);
  }

  double jacobian(double v) const {
    const double w = join();
    return v <= w ? std::exp(v) : std::exp(2.0 * w - v);
  }

  double operator()(Kernel k) const {
    const double w = join();
    const double v_min = w + kLogFloor;
    const double v_max = w - kLogFloor;
    const double l_min = log_u_at(v_min);
    const double l_mid = log_u_at(w);
    const double l_max = log_u_at(v_max);

    // log u is monotone in theta: find where it crosses 0, the peak of u e^-u and the
    // step of e^-u.
    double v_root = kInf;
    auto f = [&](double v) { return log_u_at(v); };
    auto solve = [&](double a, double b) {
      std::uintmax_t iters = 100;
      auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x)); };
      auto r = boost::math::tools::toms748_solve(f, a, b, tol, iters);
      return 0.5 * (r.first + r.second);
    };
    if (std::isfinite(l_mid) && l_mid == 0.0) {
      v_root = w;
    } else if ((l_min < 0.0) != (l_mid < 0.0) && std::isfinite(l_mid)) {
      v_root = solve(v_min, w);
    } else if ((l_mid < 0.0) != (l_max < 0.0) && std::isfinite(l_mid)) {
      v_root = solve(w, v_max);
    }

    std::array<double, 16> bp{};
    std::size_t n = 0;
    const double left_anchor = v_root <= w ? v_root : w;
    const double right_anchor = (v_root > w && std::isfinite(v_root)) ? v_root : w;
    bp[n++] = left_anchor - kLogCut;
    bp[n++] = right_anchor + kLogCut;
    bp[n++] = w;
    if (std::isfinite(v_root)) {
      bp[n++] = v_root;
      // Local width of the transition: one unit of log u.
      const double h = 1e-6 * std::max(1.0, std::abs(v_root));
      const double slope = std::abs(log_u_at(v_root + h) - log_u_at(v_root - h)) / (2.0 * h);
      if (std::isfinite(slope) && slope > 0.0) {
        for (double c : {2.0, 8.0, 32.0}) {
          bp[n++] = v_root - c / slope;
          bp[n++] = v_root + c / slope;
        }
      }
    }
    const double lo = bp[0];
    const double hi = bp[1];
    std::sort(bp.begin(), bp.begin() + static_cast<std::ptrdiff_t>(n));
    std::array<double, 16> clipped{};
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double b = std::clamp(bp[i], lo, hi);
      if (m == 0 || b > clipped[m - 1]) clipped[m++] = b;
    }

    auto g = [&](double v) {
      const double lu = log_u_at(v);
      if (std::isnan(lu)) return 0.0;
      return kernel_value(k, lu) * jacobian(v);
    };
    QuadratureOptions q{abs_floor, opts.rel_tol, opts.max_subdivisions};
    auto res = integrate(g, std::span<const double>(clipped.data(), m), q);
    if (!res.converged) {
      throw ConvergenceError("stable density quadrature did not converge (subdivisions " + std::to_string(res.subdivisions) + ", estimate " +
                             std::to_string(res.value) + ", error " + std::to_string(res.abs_error * 1e15) + "e-15)");
    }
    return res.value;
  }
};

struct Geometry {
  double alpha;
  double beta;
  double y;      // beta * tan(pi alpha / 2)
  double zeta;   // mode-region reference point, -y
  double upper;  // pi/2 + theta0
};

Geometry geometry(double alpha, double beta) {
  Geometry g{alpha, beta, 0.0, 0.0, 0.0};
  const double tpa = tan_pi_alpha_half(alpha);
  g.y = beta * tpa;
  g.zeta = -g.y;
  // alpha * upper = alpha pi/2 + atan(y), rearranged to avoid cancellation when y << 0.
  double a_upper = 0.0;
  if (g.y < 0.0) {
    a_upper = (alpha - 1.0) * kHalfPi - std::atan(1.0 / g.y);
  } else {
    a_upper = alpha * kHalfPi + std::atan(g.y);
  }
  g.upper = std::max(0.0, a_upper / alpha);
  return g;
}

ZolotarevIntegrand make_integrand(const Geometry& g, double log_h) {
  ZolotarevIntegrand it{g.alpha, g.beta, false, g.upper, log_h};
  it.inv_am1 = 1.0 / (g.alpha - 1.0);
  it.a_over_am1 = g.alpha / (g.alpha - 1.0);
  const double r = std::hypot(1.0, g.y);
  it.log_cos_at0 = -0.5 * std::log1p(g.y * g.y);
  it.cos_at0 = 1.0 / r;
  it.sin_at0 = g.y / r;
  it.right_deficit = (2.0 - g.alpha) * kHalfPi - std::atan(g.y);
  return it;
}

double prob_floor(const EvalOptions& opts) { return opts.abs_tol; }
constexpr double kDensityFloor = 1e-300;

// ---- standardized S0 densities (gamma = 1, delta = 0) -------------------------------

double std_pdf_alpha_one(double beta, double z, const EvalOptions& opts) {
  if (beta < 0.0) return std_pdf_alpha_one(-beta, -z, opts);
  ZolotarevIntegrand it{1.0, beta, true, kPi, -kPi * z / (2.0 * beta)};
  ZolotarevQuadrature q{it, opts, kDensityFloor};
  return q(Kernel::density) / (2.0 * beta);
}

TailProbabilities std_tails_alpha_one(double beta, double z, const EvalOptions& opts) {
  if (beta < 0.0) {
    auto t = std_tails_alpha_one(-beta, -z, opts);
    return {t.upper, t.lower};
  }
  ZolotarevIntegrand it{1.0, beta, true, kPi, -kPi * z / (2.0 * beta)};
  ZolotarevQuadrature q{it, opts, prob_floor(opts) * kPi};
  const double lower = q(Kernel::exp_neg) / kPi;
  if (lower <= 0.5) return {lower, 1.0 - lower};
  const double upper = q(Kernel::neg_expm1) / kPi;
  return {1.0 - upper, upper};
}

double std_pdf_general(double alpha, double beta, double z, const EvalOptions& opts) {
  const Geometry g = geometry(alpha, beta);
  if (z < g.zeta) return std_pdf_general(alpha, -beta, -z, opts);
  if (z == g.zeta) {
    return std::tgamma(1.0 + 1.0 / alpha) * std::sin(g.upper) /
           (kPi * std::pow(1.0 + g.zeta * g.zeta, 1.0 / (2.0 * alpha)));
  }
  if (g.upper <= 0.0) return 0.0;
  const double dz = z - g.zeta;
  auto it = make_integrand(g, alpha / (alpha - 1.0) * std::log(dz));
  ZolotarevQuadrature q{it, opts, kDensityFloor};
  return alpha / (kPi * std::abs(alpha - 1.0) * dz) * q(Kernel::density);
}

TailProbabilities std_tails_general(double alpha, double beta, double z, const EvalOptions& opts) {
  const Geometry g = geometry(alpha, beta);
  if (z < g.zeta) {
    auto t = std_tails_general(alpha, -beta, -z, opts);
    return {t.upper, t.lower};
  }
  const double c1 = (kPi - g.upper) / kPi;
  if (z == g.zeta || g.upper <= 0.0) {
    if (g.upper <= 0.0 && alpha < 1.0) return {1.0, 0.0};
    return {c1, 1.0 - c1};
  }
  const double dz = z - g.zeta;
  auto it = make_integrand(g, alpha / (alpha - 1.0) * std::log(dz));
  ZolotarevQuadrature q{it, opts, prob_floor(opts) * kPi};
  if (alpha > 1.0) {
    const double upper = q(Kernel::exp_neg) / kPi;
    return {1.0 - upper, upper};
  }
  const double lower = c1 + q(Kernel::exp_neg) / kPi;
  if (lower <= 0.5) return {lower, 1.0 - lower};
  const double upper = q(Kernel::neg_expm1) / kPi;
  return {1.0 - upper, upper};
}

// ---- Fourier inversion of the standardized S0 characteristic function ---------------

double std_phase(double alpha, double beta, double t) {
  if (is_alpha_one(alpha)) return -beta * (2.0 / kPi) * t * std::log(t);
  return -beta * tan_pi_alpha_half(alpha) * (t - std::pow(t, alpha));
}

template <class F>
double fourier_integral(double alpha, double z, F&& integrand, const EvalOptions& opts) {
  const double t_max = std::pow(42.0, 1.0 / alpha);
  const double period = kPi / std::max(1.0, std::abs(z));
  std::vector<double> bp{0.0};
  for (double t = period; t < t_max; t += period) bp.push_back(t);
  bp.push_back(t_max);
  QuadratureOptions q{opts.abs_tol * 1e-3, opts.rel_tol, std::max<int>(opts.max_subdivisions, 4 * static_cast<int>(bp.size()))};
  auto res = integrate(integrand, std::span<const double>(bp), q);
  if (!res.converged) throw ConvergenceError("Fourier inversion did not converge");
  return res.value;
}

double std_pdf_fourier(double alpha, double beta, double z, const EvalOptions& opts) {
  auto f = [&](double t) {
    if (t <= 0.0) return 1.0;
    return std::exp(-std::pow(t, alpha)) * std::cos(std_phase(alpha, beta, t) - t * z);
  };
  return fourier_integral(alpha, z, f, opts) / kPi;
}

TailProbabilities std_tails_fourier(double alpha, double beta, double z, const EvalOptions& opts) {
  auto f = [&](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(-std::pow(t, alpha)) * std::sin(std_phase(alpha, beta, t) - t * z) / t;
  };
  const double lower = 0.5 - fourier_integral(alpha, z, f, opts) / kPi;
  return {lower, 1.0 - lower};
}

// Within this distance of alpha = 1 (but outside the alpha = 1 branch) the integral
// representation is ill-conditioned: zeta = -beta tan(pi alpha / 2) grows like 1/(alpha - 1)
// and z - zeta loses that many digits. The S0 law is smooth in alpha there, so values are
// interpolated from nodes at 1 + k h, k = -2..2, which stay well conditioned.
constexpr double kNearOneStep = 2e-3;

bool near_alpha_one(double alpha, const EvalOptions& opts) {
  return opts.method != DensityMethod::fourier && !is_alpha_one(alpha) &&
         std::abs(alpha - 1.0) < kNearOneStep;
}

// Lagrange interpolation through (1 + k h, values[k + 2]).
double interpolate_near_one(double alpha, const std::array<double, 5>& values) {
  const double s = (alpha - 1.0) / kNearOneStep;
  double out = 0.0;
  for (int i = 0; i < 5; ++i) {
    double w = 1.0;
    for (int j = 0; j < 5; ++j) {
      if (j != i) w *= (s - (j - 2)) / static_cast<double>(i - j);
    }
    out += w * values[static_cast<std::size_t>(i)];
  }
  return out;
}

double std_pdf(double alpha, double beta, double z, const EvalOptions& opts);
TailProbabilities std_tails(double alpha, double beta, double z, const EvalOptions& opts);

double std_pdf_near_one(double alpha, double beta, double z, const EvalOptions& opts) {
  std::array<double, 5> raw{};
  bool positive = true;
  for (int k = -2; k <= 2; ++k) {
    raw[static_cast<std::size_t>(k + 2)] = std_pdf(1.0 + k * kNearOneStep, beta, z, opts);
    positive = positive && raw[static_cast<std::size_t>(k + 2)] > 0.0;
  }
  if (!positive) return std::max(0.0, interpolate_near_one(alpha, raw));
  std::array<double, 5> logs{};
  std::transform(raw.begin(), raw.end(), logs.begin(), [](double v) { return std::log(v); });
  return std::exp(interpolate_near_one(alpha, logs));
}

TailProbabilities std_tails_near_one(double alpha, double beta, double z, const EvalOptions& opts) {
  std::array<TailProbabilities, 5> nodes{};
  for (int k = -2; k <= 2; ++k) {
    nodes[static_cast<std::size_t>(k + 2)] = std_tails(1.0 + k * kNearOneStep, beta, z, opts);
  }
  // Interpolate whichever tail is smaller, on the log scale when all nodes are positive.
  const bool use_lower = nodes[2].lower <= nodes[2].upper;
  std::array<double, 5> raw{};
  bool positive = true;
  for (std::size_t i = 0; i < 5; ++i) {
    raw[i] = use_lower ? nodes[i].lower : nodes[i].upper;
    positive = positive && raw[i] > 0.0;
  }
  double tail = 0.0;
  if (positive) {
    std::array<double, 5> logs{};
    std::transform(raw.begin(), raw.end(), logs.begin(), [](double v) { return std::log(v); });
    tail = std::exp(interpolate_near_one(alpha, logs));
  } else {
    tail = std::max(0.0, interpolate_near_one(alpha, raw));
  }
  tail = std::min(tail, 1.0);
  return use_lower ? TailProbabilities{tail, 1.0 - tail} : TailProbabilities{1.0 - tail, tail};
}

double std_pdf(double alpha, double beta, double z, const EvalOptions& opts) {
  if (opts.method == DensityMethod::fourier) return std_pdf_fourier(alpha, beta, z, opts);
  if (near_alpha_one(alpha, opts)) return std_pdf_near_one(alpha, beta, z, opts);
  if (is_alpha_one(alpha)) {
    if (beta == 0.0) {
      return opts.method == DensityMethod::integral ? std_pdf_fourier(1.0, 0.0, z, opts)
                                                    : 1.0 / (kPi * (1.0 + z * z));
    }
    return std_pdf_alpha_one(beta, z, opts);
  }
  return std_pdf_general(alpha, beta, z, opts);
}

TailProbabilities std_tails(double alpha, double beta, double z, const EvalOptions& opts) {
  if (opts.method == DensityMethod::fourier) return std_tails_fourier(alpha, beta, z, opts);
  if (near_alpha_one(alpha, opts)) return std_tails_near_one(alpha, beta, z, opts);
  if (is_alpha_one(alpha)) {
    if (beta == 0.0) {
      if (opts.method == DensityMethod::integral) return std_tails_fourier(1.0, 0.0, z, opts);
      const double a = std::atan(1.0 / std::abs(z)) / kPi;
      if (z == 0.0) return {0.5, 0.5};
      return z > 0.0 ? TailProbabilities{1.0 - a, a} : TailProbabilities{a, 1.0 - a};
    }
    return std_tails_alpha_one(beta, z, opts);
  }
  return std_tails_general(alpha, beta, z, opts);
}

// ---- closed-form dispatch -----------------------------------------------------------

enum class Family { none, gaussian, cauchy, levy, levy_reflected };

Family closed_family(const StableParams& p, const EvalOptions& opts) {
  if (opts.method != DensityMethod::automatic) return Family::none;
  if (p.alpha == 2.0) return Family::gaussian;
  if (p.alpha == 1.0 && p.beta == 0.0) return Family::cauchy;
  if (p.alpha == 0.5 && p.beta == 1.0) return Family::levy;
  if (p.alpha == 0.5 && p.beta == -1.0) return Family::levy_reflected;
  return Family::none;
}

TailProbabilities closed_tails(Family fam, double x, double gamma, double delta) {
  const double d = x - delta;
  switch (fam) {
    case Family::gaussian: {
      const double lower = 0.5 * std::erfc(-d / (2.0 * gamma));
      const double upper = 0.5 * std::erfc(d / (2.0 * gamma));
      return {lower, upper};
    }
    case Family::cauchy: {
      if (d == 0.0) return {0.5, 0.5};
      const double a = std::atan(gamma / std::abs(d)) / kPi;
      return d > 0.0 ? TailProbabilities{1.0 - a, a} : TailProbabilities{a, 1.0 - a};
    }
    case Family::levy: {
      if (d <= 0.0) return {0.0, 1.0};
      const double r = std::sqrt(gamma / (2.0 * d));
      return {std::erfc(r), std::erf(r)};
    }
    case Family::levy_reflected: {
      auto t = closed_tails(Family::levy, -x, gamma, -delta);
      return {t.upper, t.lower};
    }
    case Family::none:
      break;
  }
  return {};
}

double closed_pdf(Family fam, double x, double gamma, double delta) {
  switch (fam) {
    case Family::gaussian:
      return closed_form::gaussian_pdf(x, gamma, delta);
    case Family::cauchy:
      return closed_form::cauchy_pdf(x, gamma, delta);
    case Family::levy:
      return closed_form::levy_pdf(x, gamma, delta);
    case Family::levy_reflected:
      return closed_form::levy_pdf(-x, gamma, -delta);
    case Family::none:
      break;
  }
  return 0.0;
}

struct Standardized {
  double alpha;
  double beta;
  double gamma;
  double delta0;
};

Standardized standardize(const StableParams& p) {
  const StableParams s0 = to_s0(p);
  return {s0.alpha, s0.beta, s0.gamma, s0.delta};
}

}  // namespace

void validate(const EvalOptions& opts) {
  if (!(opts.rel_tol > 0.0)) throw DomainError("rel_tol", "rel_tol must be positive");
  if (!(opts.abs_tol > 0.0)) throw DomainError("abs_tol", "abs_tol must be positive");
  if (opts.max_subdivisions < 10) throw DomainError("max_subdivisions", "max_subdivisions must be >= 10");
}

double pdf(const StableParams& params, double x, const EvalOptions& opts) {
  validate(params);
  validate(opts);
  if (std::isnan(x)) throw DomainError("x", "x must not be NaN");
  if (std::isinf(x)) return 0.0;
  if (auto fam = closed_family(params, opts); fam != Family::none) {
    const StableParams s1 = from_s0(params);
    return closed_pdf(fam, x, s1.gamma, s1.delta);
  }
  const Standardized s = standardize(params);
  const double z = (x - s.delta0) / s.gamma;
  return std_pdf(s.alpha, s.beta, z, opts) / s.gamma;
}

double log_pdf(const StableParams& params, double x, const EvalOptions& opts) {
  return std::log(pdf(params, x, opts));
}

TailProbabilities tail_probabilities(const StableParams& params, double x, const EvalOptions& opts) {
  validate(params);
  validate(opts);
  if (std::isnan(x)) throw DomainError("x", "x must not be NaN");
  if (x == kInf) return {1.0, 0.0};
  if (x == -kInf) return {0.0, 1.0};
  if (auto fam = closed_family(params, opts); fam != Family::none) {
    const StableParams s1 = from_s0(params);
    return closed_tails(fam, x, s1.gamma, s1.delta);
  }
  const Standardized s = standardize(params);
  const double z = (x - s.delta0) / s.gamma;
  auto t = std_tails(s.alpha, s.beta, z, opts);
  t.lower = std::clamp(t.lower, 0.0, 1.0);
  t.upper = std::clamp(t.upper, 0.0, 1.0);
  return t;
}

double cdf(const StableParams& params, double x, const EvalOptions& opts) {
  return tail_probabilities(params, x, opts).lower;
}

std::vector<double> pdf(const StableParams& params, std::span<const double> xs, const EvalOptions& opts) {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(), [&](double x) { return pdf(params, x, opts); });
  return out;
}

std::vector<double> cdf(const StableParams& params, std::span<const double> xs, const EvalOptions& opts) {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(), [&](double x) { return cdf(params, x, opts); });
  return out;
}

double quantile(const StableParams& params, double p, const EvalOptions& opts) {
  validate(params);
  validate(opts);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p", "probability must lie in (0, 1)");

  if (auto fam = closed_family(params, opts); fam != Family::none) {
    const StableParams s1 = from_s0(params);
    const double g = s1.gamma;
    const double d = s1.delta;
    switch (fam) {
      case Family::gaussian:
        return d - 2.0 * g * boost::math::erfc_inv(2.0 * p);
      case Family::cauchy:
        if (p == 0.5) return d;
        return p < 0.5 ? d - g / std::tan(kPi * p) : d + g / std::tan(kPi * (1.0 - p));
      case Family::levy: {
        const double r = boost::math::erfc_inv(p);
        return d + g / (2.0 * r * r);
      }
      case Family::levy_reflected: {
        const double r = boost::math::erfc_inv(1.0 - p);
        return d - g / (2.0 * r * r);
      }
      case Family::none:
        break;
    }
  }

  // Solve on the standardized S0 scale. For p > 1/2 the upper tail is matched instead so
  // that probabilities close to 1 keep their relative accuracy.
  const Standardized s = standardize(params);
  const bool use_upper = p > 0.5;
  const double target = use_upper ? 1.0 - p : p;
  auto residual = [&](double z) {
    auto t = std_tails(s.alpha, s.beta, z, opts);
    return use_upper ? target - t.upper : t.lower - target;
  };

  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  {
    double z = 0.0;
    double f = residual(z);
    double step = 1.0;
    if (f == 0.0) return s.delta0;
    if (f < 0.0) {
      lo = z;
      f_lo = f;
      for (int i = 0; i < 2000; ++i) {
        z = lo + step;
        f = residual(z);
        if (f >= 0.0) break;
        lo = z;
        f_lo = f;
        step *= 2.0;
        if (!std::isfinite(z)) throw ConvergenceError("quantile bracket search diverged");
      }
      hi = z;
      f_hi = f;
    } else {
      hi = z;
      f_hi = f;
      for (int i = 0; i < 2000; ++i) {
        z = hi - step;
        f = residual(z);
        if (f <= 0.0) break;
        hi = z;
        f_hi = f;
        step *= 2.0;
        if (!std::isfinite(z)) throw ConvergenceError("quantile bracket search diverged");
      }
      lo = z;
      f_lo = f;
    }
  }

  // Safeguarded Newton: Newton steps that leave the bracket or stall fall back to bisection.
  double z = f_lo == 0.0 ? lo : (f_hi == 0.0 ? hi : lo - f_lo * (hi - lo) / (f_hi - f_lo));
  for (int iter = 0; iter < 300; ++iter) {
    const double f = residual(z);
    if (f == 0.0) break;
    if (f < 0.0) {
      lo = z;
    } else {
      hi = z;
    }
    if (std::abs(f) <= 1e-14 * target) break;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z))) break;
    const double slope = std_pdf(s.alpha, s.beta, z, opts);
    double next = slope > 0.0 ? z - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    z = next;
    if (iter == 299) throw ConvergenceError("quantile root finder did not converge");
  }
  return s.gamma * z + s.delta0;
}

double std_normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double paretian_tail_mass(const StableParams& params, double x) {
  validate(params);
  const StableParams s1 = from_s0(params);
  if (s1.alpha >= 2.0) throw DomainError("alpha", "no Paretian tail at alpha = 2");
  const double c = std::tgamma(s1.alpha) * std::sin(kHalfPi * s1.alpha) / kPi;
  const double d = x - s1.delta;
  const double weight = d >= 0.0 ? 1.0 + s1.beta : 1.0 - s1.beta;
  return c * weight * std::pow(s1.gamma / std::abs(d), s1.alpha);
}

namespace closed_form {

double gaussian_pdf(double x, double gamma, double delta) noexcept {
  const double d = x - delta;
  return std::exp(-d * d / (4.0 * gamma * gamma)) / (2.0 * gamma * std::sqrt(kPi));
}

double gaussian_cdf(double x, double gamma, double delta) noexcept {
  return std_normal_cdf((x - delta) / (std::numbers::sqrt2 * gamma));
}

double cauchy_pdf(double x, double gamma, double delta) noexcept {
  const double d = x - delta;
  return gamma / (kPi * (d * d + gamma * gamma));
}

double cauchy_cdf(double x, double gamma, double delta) noexcept {
  return 0.5 + std::atan((x - delta) / gamma) / kPi;
}

double levy_pdf(double x, double gamma, double delta) noexcept {
  const double d = x - delta;
  if (d <= 0.0) return 0.0;
  return std::sqrt(gamma / (2.0 * kPi)) / (d * std::sqrt(d)) * std::exp(-gamma / (2.0 * d));
}

double levy_cdf(double x, double gamma, double delta) noexcept {
  const double d = x - delta;
  if (d <= 0.0) return 0.0;
  return 2.0 * (1.0 - std_normal_cdf(std::sqrt(gamma / d)));
}

}  // namespace closed_form

}  // namespace stablefit
