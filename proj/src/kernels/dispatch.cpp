#include "rankmat/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"

namespace rankmat::kernels {

namespace {

const KernelTable kScalar{"scalar", &detail::dot_scalar,
                          &detail::pair_step_scalar, &detail::row_dots_scalar};

#if defined(RANKMAT_HAVE_AVX2)
const KernelTable kAvx2{"avx2", &detail::dot_avx2, &detail::pair_step_avx2,
                        &detail::row_dots_avx2};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable* lookup(std::string_view name) {
  if (name == "scalar") return &kScalar;
  if (name == "avx2") return avx2();
  return nullptr;
}

const KernelTable* resolve_default() {
  if (const char* env = std::getenv("RANKMAT_KERNEL")) {
    if (const KernelTable* t = lookup(env)) return t;
  }
  if (const KernelTable* t = avx2()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& scalar() { return kScalar; }

const KernelTable* avx2() {
#if defined(RANKMAT_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    const KernelTable* chosen = resolve_default();
    g_active.compare_exchange_strong(t, chosen, std::memory_order_acq_rel);
    t = g_active.load(std::memory_order_acquire);
  }
  return *t;
}

bool select(std::string_view name) {
  const KernelTable* t = lookup(name);
  if (t == nullptr) return false;
  g_active.store(t, std::memory_order_release);
  return true;
}

}  // namespace rankmat::kernels
