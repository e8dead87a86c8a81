#include <algorithm>
#include <cmath>

#include "stablefit/simd/kernels.hpp"

namespace stablefit::simd::detail {

namespace {

MomentSums moment_sums_scalar(std::span<const double> x, double center) {
  MomentSums s;
  for (double v : x) {
    const double d = v - center;
    const double d2 = d * d;
    s.d1 += d;
    s.d2 += d2;
    s.d3 += d2 * d;
    s.d4 += d2 * d2;
  }
  return s;
}

double ks_sup_deviation_scalar(std::span<const double> f) {
  const double n = static_cast<double>(f.size());
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    best = std::max(best, std::max(hi - f[i], f[i] - lo));
  }
  return best;
}

TrigSums trig_sums_scalar(std::span<const double> x, double t) {
  TrigSums s;
  for (double v : x) {
    s.cos_sum += std::cos(t * v);
    s.sin_sum += std::sin(t * v);
  }
  return s;
}

double log1p_quadratic_sum_scalar(std::span<const double> x, double loc, double inv_scale, double inv_dof) {
  double s = 0.0;
  for (double v : x) {
    const double z = (v - loc) * inv_scale;
    s += std::log1p(z * z * inv_dof);
  }
  return s;
}

double interp_log_density_sum_scalar(std::span<const double> x, double loc, double inv_scale,
                                     const LogDensityTable& table) {
  double s = 0.0;
  for (double v : x) {
    const double u = std::asinh((v - loc) * inv_scale);
    const double pos = (u - table.u_origin) * table.inv_h;
    const double fl = std::floor(pos);
    const auto k = static_cast<std::ptrdiff_t>(fl);
    double w[4];
    lagrange4_weights(pos - fl, w);
    const double* g = table.values + (k - 1);
    s += w[0] * g[0] + w[1] * g[1] + w[2] * g[2] + w[3] * g[3];
  }
  return s;
}

}  // namespace

const KernelSet& scalar_kernels() noexcept {
  static const KernelSet set{moment_sums_scalar, ks_sup_deviation_scalar, trig_sums_scalar,
                             log1p_quadratic_sum_scalar, interp_log_density_sum_scalar};
  return set;
}

}  // namespace stablefit::simd::detail
