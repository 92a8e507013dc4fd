#include "gubqc/kernels.hpp"

#include <cstdlib>
#include <string>

#include "gubqc/errors.hpp"

namespace gubqc {
namespace kernels {
namespace detail {
const KernelTable* avx2_table();
}

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* select_table() {
  const char* env = std::getenv("GUBQC_KERNELS");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return &scalar_kernels();
  if (choice == "avx2") {
    const KernelTable* t = avx2_kernels();
    if (!t) {
      throw ConfigError("GUBQC_KERNELS=avx2 but AVX2+FMA is unavailable");
    }
    return t;
  }
  if (choice != "auto") {
    throw ConfigError("GUBQC_KERNELS must be auto, scalar, or avx2 (got \"" +
                      choice + "\")");
  }
  const KernelTable* t = avx2_kernels();
  return t ? t : &scalar_kernels();
}

}  // namespace

const KernelTable* avx2_kernels() {
  if (!cpu_has_avx2()) return nullptr;
  return detail::avx2_table();
}

const KernelTable& active_kernels() {
  static const KernelTable* table = select_table();
  return *table;
}

}  // namespace kernels
}  // namespace gubqc
