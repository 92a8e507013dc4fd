#include "gubqc/kernels.hpp"

#include <bit>
#include <cmath>

namespace gubqc {
namespace kernels {
namespace {

void hadamard_scalar(cdouble* amp, size_t n_amps, int target) {
  const size_t stride = size_t{1} << target;
  const double inv_sqrt2 = 0.70710678118654752440;
  for (size_t base = 0; base < n_amps; base += 2 * stride) {
    for (size_t i = base; i < base + stride; ++i) {
      const cdouble a = amp[i];
      const cdouble b = amp[i + stride];
      amp[i] = (a + b) * inv_sqrt2;
      amp[i + stride] = (a - b) * inv_sqrt2;
    }
  }
}

void cz_mask_scalar(cdouble* amp, size_t n_amps, uint64_t mask) {
  for (size_t i = 0; i < n_amps; ++i) {
    if ((i & mask) == mask) amp[i] = -amp[i];
  }
}

void z_mask_scalar(cdouble* amp, size_t n_amps, uint64_t mask) {
  for (size_t i = 0; i < n_amps; ++i) {
    if (std::popcount(i & mask) & 1u) amp[i] = -amp[i];
  }
}

void phase_mul_scalar(cdouble* amp, size_t n_amps, const cdouble* factors) {
  for (size_t i = 0; i < n_amps; ++i) amp[i] *= factors[i];
}

double norm_sq_scalar(const cdouble* amp, size_t n_amps) {
  double acc = 0.0;
  for (size_t i = 0; i < n_amps; ++i) acc += std::norm(amp[i]);
  return acc;
}

void scale_scalar(cdouble* amp, size_t n_amps, double s) {
  for (size_t i = 0; i < n_amps; ++i) amp[i] *= s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table = {
      "scalar",        hadamard_scalar, cz_mask_scalar,
      z_mask_scalar,   phase_mul_scalar, norm_sq_scalar,
      scale_scalar,
  };
  return table;
}

}  // namespace kernels
}  // namespace gubqc
