#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and, on x86-64,
// an AVX2/FMA version; the active one is picked once at first use from the CPU features.
// Set STABLEFIT_ISA=scalar (or avx2) to override. Results of the two versions agree to
// rounding (the tests pin the tolerances), not bit for bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace stablefit::simd {

enum class Isa { scalar, avx2 };

/// True if this build contains the variant and the CPU can run it.
bool isa_available(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Switch variants at run time (tests use this to compare them). Throws DomainError
/// if the variant is unavailable.
void set_active_isa(Isa isa);
std::string_view isa_name(Isa isa) noexcept;

struct MomentSums {
  double d1 = 0.0;  ///< sum (x - c)
  double d2 = 0.0;  ///< sum (x - c)^2
  double d3 = 0.0;
  double d4 = 0.0;
};

/// Power sums of deviations from `center`.
MomentSums moment_sums(std::span<const double> x, double center);

/// max_i max((i + 1)/n - F_i, F_i - i/n) for F_i the CDF at the i-th order statistic.
double ks_sup_deviation(std::span<const double> sorted_cdf);

/// sum cos(t x_j) and sum sin(t x_j).
struct TrigSums {
  double cos_sum = 0.0;
  double sin_sum = 0.0;
};
TrigSums trig_sums(std::span<const double> x, double t);

/// sum log1p(((x_j - loc) * inv_scale)^2 * inv_dof), the data term of the Student-t
/// log-likelihood.
double log1p_quadratic_sum(std::span<const double> x, double loc, double inv_scale, double inv_dof);

/// Log-density tabulated at u_k = u_origin + k h, u = asinh(z), interpolated by the
/// 4-point Lagrange rule on nodes floor(.)-1 .. floor(.)+2.
struct LogDensityTable {
  const double* values = nullptr;
  std::size_t size = 0;
  double u_origin = 0.0;
  double inv_h = 0.0;
};

/// sum g(asinh((x_j - loc) * inv_scale)) for the interpolated table g. Every stencil
/// must lie inside the table (the caller sizes it from the data range).
double interp_log_density_sum(std::span<const double> x, double loc, double inv_scale,
                              const LogDensityTable& table);

namespace detail {

struct KernelSet {
  MomentSums (*moment_sums)(std::span<const double>, double);
  double (*ks_sup_deviation)(std::span<const double>);
  TrigSums (*trig_sums)(std::span<const double>, double);
  double (*log1p_quadratic_sum)(std::span<const double>, double, double, double);
  double (*interp_log_density_sum)(std::span<const double>, double, double, const LogDensityTable&);
};

const KernelSet& scalar_kernels() noexcept;
#ifdef STABLEFIT_HAVE_AVX2_KERNELS
const KernelSet& avx2_kernels() noexcept;
#endif

/// Shared by both variants so that table indexing is identical.
inline void lagrange4_weights(double t, double w[4]) noexcept {
  // Nodes at -1, 0, 1, 2 relative to the left bracket node.
  const double tm1 = t - 1.0;
  const double tm2 = t - 2.0;
  const double tp1 = t + 1.0;
  w[0] = -t * tm1 * tm2 / 6.0;
  w[1] = tp1 * tm1 * tm2 / 2.0;
  w[2] = -tp1 * t * tm2 / 2.0;
  w[3] = tp1 * t * tm1 / 6.0;
}

}  // namespace detail

}  // namespace stablefit::simd
