#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fastgraph/simd/kernels.hpp"

namespace fastgraph::simd {

const KernelTable* avx2_kernels() noexcept;

namespace {

bool cpu_has_avx2() noexcept {
#if (defined(__GNUC__) || defined(__clang__)) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  if (const char* env = std::getenv("FASTGRAPH_SIMD")) {
    Backend requested;
    if (parse_backend(env, requested) && backend_supported(requested)) {
      return &kernels_for(requested);
    }
  }
  if (backend_supported(Backend::Avx2)) return avx2_kernels();
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

bool backend_supported(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return avx2_kernels() != nullptr && cpu_has_avx2();
  }
  return false;
}

const KernelTable& kernels_for(Backend backend) {
  if (!backend_supported(backend)) {
    throw std::invalid_argument("SIMD backend not available: " + std::string(backend_name(backend)));
  }
  if (backend == Backend::Avx2) return *avx2_kernels();
  return scalar_kernels();
}

const KernelTable& kernels() noexcept { return *active_slot().load(std::memory_order_acquire); }

void set_backend(Backend backend) { active_slot().store(&kernels_for(backend), std::memory_order_release); }

Backend active_backend() noexcept { return kernels().backend; }

std::string_view backend_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

bool parse_backend(std::string_view text, Backend& out) noexcept {
  if (text == "scalar") {
    out = Backend::Scalar;
    return true;
  }
  if (text == "avx2") {
    out = Backend::Avx2;
    return true;
  }
  return false;
}

}  // namespace fastgraph::simd
