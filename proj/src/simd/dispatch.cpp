#include <atomic>
#include <cstdlib>
#include <string_view>

#include "qmem/simd/kernels.hpp"

namespace qmem::simd {

#if defined(QMEM_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(QMEM_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* best_available() {
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

const KernelTable* initial_choice() {
  if (const char* env = std::getenv("QMEM_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && avx2_kernels()) return avx2_kernels();
  }
  return best_available();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_choice()};
  return slot;
}

}  // namespace

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

bool select_kernels(std::string_view name) {
  const KernelTable* t = nullptr;
  if (name == "scalar")
    t = &scalar_kernels();
  else if (name == "avx2")
    t = avx2_kernels();
  else if (name == "auto")
    t = best_available();
  if (!t) return false;
  active_slot().store(t, std::memory_order_release);
  return true;
}

}  // namespace qmem::simd
