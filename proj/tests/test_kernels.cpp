#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "gubqc/kernels.hpp"
#include "gubqc/rng.hpp"
#include "support.hpp"

using gubqc::cdouble;
using gubqc::Rng;
using namespace gubqc::kernels;

namespace {

std::vector<cdouble> random_amps(int n, Rng& rng) {
  std::vector<cdouble> amp(size_t{1} << n);
  for (auto& a : amp) a = {rng.gaussian(), rng.gaussian()};
  return amp;
}

double max_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("scalar hadamard matches the dense matrix") {
  Rng rng(11);
  const auto& k = scalar_kernels();
  for (int n = 1; n <= 3; ++n) {
    for (int target = 0; target < n; ++target) {
      auto amp = random_amps(n, rng);
      auto expected = testsupport::apply_matrix(
          testsupport::hadamard_on(n, target), amp);
      k.hadamard(amp.data(), amp.size(), target);
      CHECK(max_diff(amp, expected) < 1e-13);
    }
  }
}

TEST_CASE("scalar z_mask and cz_mask agree with sign definitions") {
  Rng rng(12);
  const auto& k = scalar_kernels();
  for (int n = 1; n <= 4; ++n) {
    const uint64_t mask = rng.next_u64() & ((uint64_t{1} << n) - 1);
    auto amp = random_amps(n, rng);
    auto z = amp;
    auto cz = amp;
    k.z_mask(z.data(), z.size(), mask);
    k.cz_mask(cz.data(), cz.size(), mask);
    for (size_t i = 0; i < amp.size(); ++i) {
      const double zs = (std::popcount(i & mask) & 1) ? -1.0 : 1.0;
      const double cs = ((i & mask) == mask) ? -1.0 : 1.0;
      CHECK(std::abs(z[i] - zs * amp[i]) < 1e-15);
      CHECK(std::abs(cz[i] - cs * amp[i]) < 1e-15);
    }
  }
}

TEST_CASE("avx2 kernels match scalar kernels on random data") {
  const KernelTable* avx2 = avx2_kernels();
  if (avx2 == nullptr) {
    MESSAGE("avx2 unavailable on this host; equivalence pass skipped");
    return;
  }
  const auto& ref = scalar_kernels();
  Rng rng(13);
  for (int n = 1; n <= 8; ++n) {
    const size_t dim = size_t{1} << n;
    auto base = random_amps(n, rng);
    const uint64_t mask = rng.next_u64() & (dim - 1);
    const int target = static_cast<int>(rng.uniform_int(n));
    auto factors = random_amps(n, rng);
    const double s = rng.gaussian();

    auto a = base;
    auto b = base;
    ref.hadamard(a.data(), dim, target);
    avx2->hadamard(b.data(), dim, target);
    CHECK(max_diff(a, b) < 1e-13);

    a = base;
    b = base;
    ref.cz_mask(a.data(), dim, mask);
    avx2->cz_mask(b.data(), dim, mask);
    CHECK(max_diff(a, b) == 0.0);

    a = base;
    b = base;
    ref.z_mask(a.data(), dim, mask);
    avx2->z_mask(b.data(), dim, mask);
    CHECK(max_diff(a, b) == 0.0);

    a = base;
    b = base;
    ref.phase_mul(a.data(), dim, factors.data());
    avx2->phase_mul(b.data(), dim, factors.data());
    CHECK(max_diff(a, b) < 1e-13);

    CHECK(std::abs(ref.norm_sq(base.data(), dim) -
                   avx2->norm_sq(base.data(), dim)) < 1e-12);

    a = base;
    b = base;
    ref.scale(a.data(), dim, s);
    avx2->scale(b.data(), dim, s);
    CHECK(max_diff(a, b) < 1e-13);
  }
}

TEST_CASE("active table is one of the published tables") {
  const auto& active = active_kernels();
  const bool is_scalar = &active == &scalar_kernels();
  const bool is_avx2 = avx2_kernels() != nullptr && &active == avx2_kernels();
  CHECK((is_scalar || is_avx2));
  CHECK(active.name != nullptr);
}
