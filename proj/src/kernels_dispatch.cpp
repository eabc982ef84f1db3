#include "qtomo/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace qtomo::kernels {

#if !defined(QTOMO_HAVE_AVX2_TU)
const KernelTable* avx2_table() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  const char* force = std::getenv("QTOMO_KERNELS");
  if (force != nullptr) {
    if (std::strcmp(force, "scalar") == 0) return scalar_table();
    if (std::strcmp(force, "avx2") == 0 && avx2_table() != nullptr &&
        cpu_has_avx2()) {
      return *avx2_table();
    }
    // Unknown or unavailable request: fall through to auto-detection.
  }
  if (avx2_table() != nullptr && cpu_has_avx2()) return *avx2_table();
  return scalar_table();
}

} // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

} // namespace qtomo::kernels
