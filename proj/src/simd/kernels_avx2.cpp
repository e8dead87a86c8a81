#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "stablefit/simd/kernels.hpp"

namespace stablefit::simd::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

// Conversions through the 1.5 * 2^52 bias; exact for integers of magnitude below 2^51.
// (No namespace-scope vector constants: this file must not run AVX code at load time.)
inline __m256d magic() { return _mm256_set1_pd(6755399441055744.0); }

inline __m256d int64_to_double(__m256i v) {
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(v, _mm256_castpd_si256(magic()))), magic());
}

inline __m256i double_to_int64(__m256d v) {  // v integral
  return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(v, magic())), _mm256_castpd_si256(magic()));
}

// Natural log for positive normal finite inputs: x = m 2^e with m in [sqrt(1/2), sqrt(2)),
// log m = 2 atanh(s), s = (m - 1)/(m + 1), |s| < 0.1716, series to s^21.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  __m256i e = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)), _mm256_set1_epi64x(0x3FF0000000000000LL)));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_epi64(e, _mm256_and_si256(_mm256_castpd_si256(big), _mm256_set1_epi64x(1)));
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(1.0 / 21.0);
  for (int k = 9; k >= 0; --k) p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / (2 * k + 1)));
  const __m256d log_m = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), s), p);
  const __m256d ed = int64_to_double(e);
  // ln 2 split in a high part exact in few bits and a low correction.
  return _mm256_add_pd(_mm256_fmadd_pd(ed, _mm256_set1_pd(1.9082149292705877000e-10), log_m),
                       _mm256_mul_pd(ed, _mm256_set1_pd(6.93147180369123816490e-01)));
}

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline __m256d asinh_pd(__m256d z) {
  const __m256d a = abs_pd(z);
  const __m256d huge = _mm256_cmp_pd(a, _mm256_set1_pd(1e150), _CMP_GT_OQ);
  const __m256d arg = _mm256_add_pd(a, _mm256_sqrt_pd(_mm256_fmadd_pd(a, a, _mm256_set1_pd(1.0))));
  __m256d r = log_pd(_mm256_blendv_pd(arg, a, huge));
  r = _mm256_blendv_pd(r, _mm256_add_pd(r, _mm256_set1_pd(0.69314718055994531)), huge);
  return _mm256_or_pd(r, _mm256_and_pd(z, _mm256_set1_pd(-0.0)));
}

MomentSums moment_sums_avx2(std::span<const double> x, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d s1 = _mm256_setzero_pd(), s2 = s1, s3 = s1, s4 = s1;
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), c);
    const __m256d d2 = _mm256_mul_pd(d, d);
    s1 = _mm256_add_pd(s1, d);
    s2 = _mm256_add_pd(s2, d2);
    s3 = _mm256_fmadd_pd(d2, d, s3);
    s4 = _mm256_fmadd_pd(d2, d2, s4);
  }
  MomentSums out{hsum(s1), hsum(s2), hsum(s3), hsum(s4)};
  for (; i < x.size(); ++i) {
    const double d = x[i] - center;
    out.d1 += d;
    out.d2 += d * d;
    out.d3 += d * d * d;
    out.d4 += d * d * d * d;
  }
  return out;
}

double ks_sup_deviation_avx2(std::span<const double> f) {
  const double n = static_cast<double>(f.size());
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= f.size(); i += 4) {
    const __m256d v = _mm256_loadu_pd(f.data() + i);
    const __m256d lo = _mm256_div_pd(idx, _mm256_set1_pd(n));
    const __m256d hi = _mm256_div_pd(_mm256_add_pd(idx, one), _mm256_set1_pd(n));
    best = _mm256_max_pd(best, _mm256_max_pd(_mm256_sub_pd(hi, v), _mm256_sub_pd(v, lo)));
    idx = _mm256_add_pd(idx, four);
  }
  double out = hmax(best);
  for (; i < f.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    out = std::max(out, std::max(hi - f[i], f[i] - lo));
  }
  return out;
}

// Cephes-style sin and cos of the same argument, valid for |x| < 1e8.
inline void sincos_pd(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d x_sign = _mm256_and_pd(x, sign_mask);
  const __m256d a = abs_pd(x);
  __m256d y = _mm256_floor_pd(_mm256_mul_pd(a, _mm256_set1_pd(1.27323954473516268615)));  // 4/pi
  __m256i j = double_to_int64(y);
  const __m256i odd = _mm256_and_si256(j, _mm256_set1_epi64x(1));
  j = _mm256_add_epi64(j, odd);
  y = _mm256_add_pd(y, int64_to_double(odd));
  __m256d z = _mm256_sub_pd(a, _mm256_mul_pd(y, _mm256_set1_pd(7.85398125648498535156e-1)));
  z = _mm256_sub_pd(z, _mm256_mul_pd(y, _mm256_set1_pd(3.77489470793079817668e-8)));
  z = _mm256_sub_pd(z, _mm256_mul_pd(y, _mm256_set1_pd(2.69515142907905952645e-15)));
  j = _mm256_and_si256(j, _mm256_set1_epi64x(7));

  const __m256d zz = _mm256_mul_pd(z, z);
  __m256d ps = _mm256_set1_pd(1.58962301576546568060e-10);
  ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-2.50507477628578072866e-8));
  ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(2.75573136213857245213e-6));
  ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-1.98412698295895385996e-4));
  ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(8.33333333332211858878e-3));
  ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-1.66666666666666307295e-1));
  const __m256d sin_poly = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), ps, z);
  __m256d pc = _mm256_set1_pd(-1.13585365213876817300e-11);
  pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(2.08757008419747316778e-9));
  pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(-2.75573141792967388112e-7));
  pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(2.48015872888517045348e-5));
  pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(-1.38888888888730564116e-3));
  pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(4.16666666666665929218e-2));
  const __m256d cos_poly =
      _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), pc, _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));

  // Octants 1, 2, 5, 6 swap the polynomials.
  const __m256i swap_i = _mm256_cmpeq_epi64(
      _mm256_and_si256(_mm256_add_epi64(j, _mm256_set1_epi64x(1)), _mm256_set1_epi64x(2)), _mm256_set1_epi64x(2));
  const __m256d swap = _mm256_castsi256_pd(swap_i);
  __m256d s = _mm256_blendv_pd(sin_poly, cos_poly, swap);
  __m256d c = _mm256_blendv_pd(cos_poly, sin_poly, swap);
  const __m256i flip_s = _mm256_slli_epi64(_mm256_srli_epi64(j, 2), 63);
  const __m256i flip_c =
      _mm256_slli_epi64(_mm256_xor_si256(_mm256_srli_epi64(j, 2), _mm256_srli_epi64(j, 1)), 63);
  s = _mm256_xor_pd(s, _mm256_castsi256_pd(flip_s));
  c = _mm256_xor_pd(c, _mm256_castsi256_pd(flip_c));
  s_out = _mm256_xor_pd(s, x_sign);
  c_out = c;
}

TrigSums trig_sums_avx2(std::span<const double> x, double t) {
  const __m256d tv = _mm256_set1_pd(t);
  const __m256d limit = _mm256_set1_pd(1e8);
  __m256d cs = _mm256_setzero_pd();
  __m256d ss = _mm256_setzero_pd();
  TrigSums out;
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const __m256d arg = _mm256_mul_pd(tv, _mm256_loadu_pd(x.data() + i));
    if (_mm256_movemask_pd(_mm256_cmp_pd(abs_pd(arg), limit, _CMP_NLT_UQ)) != 0) {
      for (std::size_t k = i; k < i + 4; ++k) {
        out.cos_sum += std::cos(t * x[k]);
        out.sin_sum += std::sin(t * x[k]);
      }
      continue;
    }
    __m256d s, c;
    sincos_pd(arg, s, c);
    cs = _mm256_add_pd(cs, c);
    ss = _mm256_add_pd(ss, s);
  }
  out.cos_sum += hsum(cs);
  out.sin_sum += hsum(ss);
  for (; i < x.size(); ++i) {
    out.cos_sum += std::cos(t * x[i]);
    out.sin_sum += std::sin(t * x[i]);
  }
  return out;
}

double log1p_quadratic_sum_avx2(std::span<const double> x, double loc, double inv_scale, double inv_dof) {
  const __m256d l = _mm256_set1_pd(loc);
  const __m256d is = _mm256_set1_pd(inv_scale);
  const __m256d id = _mm256_set1_pd(inv_dof);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const __m256d z = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x.data() + i), l), is);
    const __m256d q = _mm256_mul_pd(_mm256_mul_pd(z, z), id);
    const __m256d w = _mm256_add_pd(one, q);
    // log1p(q) = log(w) - ((w - 1) - q) / w recovers the bits lost in forming w.
    const __m256d corr = _mm256_div_pd(_mm256_sub_pd(_mm256_sub_pd(w, one), q), w);
    acc = _mm256_add_pd(acc, _mm256_sub_pd(log_pd(w), corr));
  }
  double out = hsum(acc);
  for (; i < x.size(); ++i) {
    const double z = (x[i] - loc) * inv_scale;
    out += std::log1p(z * z * inv_dof);
  }
  return out;
}

double interp_log_density_sum_avx2(std::span<const double> x, double loc, double inv_scale,
                                   const LogDensityTable& table) {
  const __m256d l = _mm256_set1_pd(loc);
  const __m256d is = _mm256_set1_pd(inv_scale);
  const __m256d origin = _mm256_set1_pd(table.u_origin);
  const __m256d ih = _mm256_set1_pd(table.inv_h);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d sixth = _mm256_set1_pd(1.0 / 6.0);
  const __m256d half = _mm256_set1_pd(0.5);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const __m256d z = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x.data() + i), l), is);
    const __m256d pos = _mm256_mul_pd(_mm256_sub_pd(asinh_pd(z), origin), ih);
    const __m256d fl = _mm256_floor_pd(pos);
    const __m256d t = _mm256_sub_pd(pos, fl);
    const __m256i k = _mm256_sub_epi64(double_to_int64(fl), _mm256_set1_epi64x(1));
    const __m256d g0 = _mm256_i64gather_pd(table.values, k, 8);
    const __m256d g1 = _mm256_i64gather_pd(table.values + 1, k, 8);
    const __m256d g2 = _mm256_i64gather_pd(table.values + 2, k, 8);
    const __m256d g3 = _mm256_i64gather_pd(table.values + 3, k, 8);
    const __m256d tm1 = _mm256_sub_pd(t, one);
    const __m256d tm2 = _mm256_sub_pd(t, two);
    const __m256d tp1 = _mm256_add_pd(t, one);
    const __m256d w0 = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(t, tm1), tm2), sixth);
    const __m256d w1 = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(tp1, tm1), tm2), half);
    const __m256d w2 = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(tp1, t), tm2), half);
    const __m256d w3 = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(tp1, t), tm1), sixth);
    // w0 and w2 carry a minus sign.
    __m256d v = _mm256_mul_pd(w1, g1);
    v = _mm256_fmadd_pd(w3, g3, v);
    v = _mm256_fnmadd_pd(w0, g0, v);
    v = _mm256_fnmadd_pd(w2, g2, v);
    acc = _mm256_add_pd(acc, v);
  }
  double out = hsum(acc);
  if (i < x.size()) {
    out += scalar_kernels().interp_log_density_sum(x.subspan(i), loc, inv_scale, table);
  }
  return out;
}

}  // namespace

const KernelSet& avx2_kernels() noexcept {
  static const KernelSet set{moment_sums_avx2, ks_sup_deviation_avx2, trig_sums_avx2,
                             log1p_quadratic_sum_avx2, interp_log_density_sum_avx2};
  return set;
}

}  // namespace stablefit::simd::detail
