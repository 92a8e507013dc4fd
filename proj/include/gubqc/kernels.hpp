#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace gubqc {

using cdouble = std::complex<double>;

namespace kernels {

// Inner loops over dense amplitude arrays. Every kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant; the active table
// is chosen once at startup from CPU features (override with
// GUBQC_KERNELS={auto,scalar,avx2}).

// Hadamard butterfly on wire `target` over n_amps = 2^n amplitudes.
using HadamardFn = void (*)(cdouble* amp, size_t n_amps, int target);
// Negate amplitudes whose index has every bit of `mask` set (controlled-Z).
using CzMaskFn = void (*)(cdouble* amp, size_t n_amps, uint64_t mask);
// Multiply amplitude i by (-1)^popcount(i & mask)  (Z^mask).
using ZMaskFn = void (*)(cdouble* amp, size_t n_amps, uint64_t mask);
// amp[i] *= factors[i].
using PhaseMulFn = void (*)(cdouble* amp, size_t n_amps,
                            const cdouble* factors);
// Sum of |amp[i]|^2.
using NormSqFn = double (*)(const cdouble* amp, size_t n_amps);
// amp[i] *= s.
using ScaleFn = void (*)(cdouble* amp, size_t n_amps, double s);

struct KernelTable {
  const char* name;
  HadamardFn hadamard;
  CzMaskFn cz_mask;
  ZMaskFn z_mask;
  PhaseMulFn phase_mul;
  NormSqFn norm_sq;
  ScaleFn scale;
};

const KernelTable& scalar_kernels();

// nullptr when AVX2+FMA is unavailable (at build or at run time).
const KernelTable* avx2_kernels();

const KernelTable& active_kernels();

}  // namespace kernels
}  // namespace gubqc
