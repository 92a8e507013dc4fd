#include "gubqc/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define GUBQC_HAVE_AVX2_BUILD 1
#include <immintrin.h>

#include <bit>
#endif

namespace gubqc {
namespace kernels {
namespace detail {
const KernelTable* avx2_table();
}

#if GUBQC_HAVE_AVX2_BUILD

namespace {

// Two complex doubles per 256-bit vector: lanes [0,1] hold amp[i],
// lanes [2,3] hold amp[i+1].

void hadamard_avx2(cdouble* amp, size_t n_amps, int target) {
  if (n_amps < 2) return;
  double* d = reinterpret_cast<double*>(amp);
  const __m256d half_sqrt2 = _mm256_set1_pd(0.70710678118654752440);
  if (target == 0) {
    const __m256d hi_neg = _mm256_set_pd(-0.0, -0.0, 0.0, 0.0);
    for (size_t i = 0; i < n_amps; i += 2) {
      __m256d v = _mm256_loadu_pd(d + 2 * i);
      __m256d w = _mm256_permute2f128_pd(v, v, 0x01);
      __m256d t = _mm256_add_pd(v, w);
      __m256d u = _mm256_sub_pd(v, w);
      __m256d r = _mm256_xor_pd(_mm256_blend_pd(t, u, 0b1100), hi_neg);
      _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(r, half_sqrt2));
    }
    return;
  }
  const size_t stride = size_t{1} << target;
  for (size_t base = 0; base < n_amps; base += 2 * stride) {
    for (size_t i = base; i < base + stride; i += 2) {
      __m256d a = _mm256_loadu_pd(d + 2 * i);
      __m256d b = _mm256_loadu_pd(d + 2 * (i + stride));
      __m256d sum = _mm256_mul_pd(_mm256_add_pd(a, b), half_sqrt2);
      __m256d diff = _mm256_mul_pd(_mm256_sub_pd(a, b), half_sqrt2);
      _mm256_storeu_pd(d + 2 * i, sum);
      _mm256_storeu_pd(d + 2 * (i + stride), diff);
    }
  }
}

struct SignLut {
  __m256d v[4];
};

SignLut make_sign_lut() {
  SignLut lut;
  lut.v[0] = _mm256_setzero_pd();
  lut.v[1] = _mm256_set_pd(0.0, 0.0, -0.0, -0.0);
  lut.v[2] = _mm256_set_pd(-0.0, -0.0, 0.0, 0.0);
  lut.v[3] = _mm256_set1_pd(-0.0);
  return lut;
}

void cz_mask_avx2(cdouble* amp, size_t n_amps, uint64_t mask) {
  if (n_amps < 2) {
    if (n_amps == 1 && (0 & mask) == mask) amp[0] = -amp[0];
    return;
  }
  const SignLut lut = make_sign_lut();
  double* d = reinterpret_cast<double*>(amp);
  for (size_t i = 0; i < n_amps; i += 2) {
    const unsigned p0 = ((i & mask) == mask) ? 1u : 0u;
    const unsigned p1 = (((i + 1) & mask) == mask) ? 1u : 0u;
    const unsigned p = p0 | (p1 << 1);
    if (!p) continue;
    __m256d v = _mm256_loadu_pd(d + 2 * i);
    _mm256_storeu_pd(d + 2 * i, _mm256_xor_pd(v, lut.v[p]));
  }
}

void z_mask_avx2(cdouble* amp, size_t n_amps, uint64_t mask) {
  if (n_amps < 2) return;
  const SignLut lut = make_sign_lut();
  double* d = reinterpret_cast<double*>(amp);
  for (size_t i = 0; i < n_amps; i += 2) {
    const unsigned p0 = std::popcount(i & mask) & 1u;
    const unsigned p1 = std::popcount((i + 1) & mask) & 1u;
    const unsigned p = p0 | (p1 << 1);
    if (!p) continue;
    __m256d v = _mm256_loadu_pd(d + 2 * i);
    _mm256_storeu_pd(d + 2 * i, _mm256_xor_pd(v, lut.v[p]));
  }
}

void phase_mul_avx2(cdouble* amp, size_t n_amps, const cdouble* factors) {
  if (n_amps < 2) {
    if (n_amps == 1) amp[0] *= factors[0];
    return;
  }
  double* d = reinterpret_cast<double*>(amp);
  const double* f = reinterpret_cast<const double*>(factors);
  for (size_t i = 0; i < n_amps; i += 2) {
    __m256d a = _mm256_loadu_pd(d + 2 * i);
    __m256d b = _mm256_loadu_pd(f + 2 * i);
    __m256d b_re = _mm256_movedup_pd(b);
    __m256d b_im = _mm256_permute_pd(b, 0xF);
    __m256d a_sw = _mm256_permute_pd(a, 0x5);
    __m256d r = _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
    _mm256_storeu_pd(d + 2 * i, r);
  }
}

double norm_sq_avx2(const cdouble* amp, size_t n_amps) {
  if (n_amps < 2) {
    return n_amps == 1 ? std::norm(amp[0]) : 0.0;
  }
  const double* d = reinterpret_cast<const double*>(amp);
  __m256d acc = _mm256_setzero_pd();
  for (size_t i = 0; i < n_amps; i += 2) {
    __m256d v = _mm256_loadu_pd(d + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s2 = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
}

void scale_avx2(cdouble* amp, size_t n_amps, double s) {
  if (n_amps < 2) {
    if (n_amps == 1) amp[0] *= s;
    return;
  }
  double* d = reinterpret_cast<double*>(amp);
  const __m256d vs = _mm256_set1_pd(s);
  for (size_t i = 0; i < n_amps; i += 2) {
    __m256d v = _mm256_loadu_pd(d + 2 * i);
    _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(v, vs));
  }
}

}  // namespace

const KernelTable* detail::avx2_table() {
  static const KernelTable table = {
      "avx2",       hadamard_avx2, cz_mask_avx2,
      z_mask_avx2,  phase_mul_avx2, norm_sq_avx2,
      scale_avx2,
  };
  return &table;
}

#else

const KernelTable* detail::avx2_table() { return nullptr; }

#endif

}  // namespace kernels
}  // namespace gubqc
