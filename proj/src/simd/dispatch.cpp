#include <atomic>
#include <cstdlib>
#include <string>

#include "stablefit/errors.hpp"
#include "stablefit/simd/kernels.hpp"

namespace stablefit::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(STABLEFIT_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  const char* env = std::getenv("STABLEFIT_ISA");
  if (env != nullptr) {
    const std::string v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && cpu_has_avx2()) return Isa::avx2;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const detail::KernelSet& kernels() {
#ifdef STABLEFIT_HAVE_AVX2_KERNELS
  if (current().load(std::memory_order_relaxed) == Isa::avx2) return detail::avx2_kernels();
#endif
  return detail::scalar_kernels();
}

}  // namespace

bool isa_available(Isa isa) noexcept {
  return isa == Isa::scalar || cpu_has_avx2();
}

Isa active_isa() noexcept { return current().load(); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) throw DomainError("isa", "instruction set not available on this machine");
  current().store(isa);
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

MomentSums moment_sums(std::span<const double> x, double center) {
  return kernels().moment_sums(x, center);
}

double ks_sup_deviation(std::span<const double> sorted_cdf) {
  return kernels().ks_sup_deviation(sorted_cdf);
}

TrigSums trig_sums(std::span<const double> x, double t) { return kernels().trig_sums(x, t); }

double log1p_quadratic_sum(std::span<const double> x, double loc, double inv_scale, double inv_dof) {
  return kernels().log1p_quadratic_sum(x, loc, inv_scale, inv_dof);
}

double interp_log_density_sum(std::span<const double> x, double loc, double inv_scale,
                              const LogDensityTable& table) {
  return kernels().interp_log_density_sum(x, loc, inv_scale, table);
}

}  // namespace stablefit::simd
