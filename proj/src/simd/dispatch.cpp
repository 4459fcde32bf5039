#include <cstdlib>
#include <cstring>

#include "qis/simd/kernels.hpp"

namespace qis::simd {

#if defined(QIS_HAVE_AVX2_TU)
const Kernels* avx2_kernels_impl();
#endif

const Kernels* avx2_kernels() {
#if defined(QIS_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
  if (__builtin_cpu_supports("avx2")) return avx2_kernels_impl();
#endif
  return nullptr;
}

const Kernels& active() {
  static const Kernels* chosen = [] {
    const char* force = std::getenv("QIS_SIMD");
    if (force != nullptr && std::strcmp(force, "scalar") == 0)
      return &scalar_kernels();
    if (const Kernels* avx2 = avx2_kernels()) return avx2;
    return &scalar_kernels();
  }();
  return *chosen;
}

} // namespace qis::simd
