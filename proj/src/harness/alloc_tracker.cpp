#include "fastgraph/harness/alloc_tracker.hpp"

#include <atomic>
#include <cstdlib>
#include <new>

namespace fastgraph::harness::alloc_tracker {
namespace {

std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};

// Header in front of every block records its size; 16 bytes keeps the
// payload aligned for max_align_t.
constexpr std::size_t kHeader = 16;

void note_alloc(std::size_t n) noexcept {
  const std::size_t now = g_current.fetch_add(n, std::memory_order_relaxed) + n;
  std::size_t peak = g_peak.load(std::memory_order_relaxed);
  while (now > peak && !g_peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
  }
}

}  // namespace

std::size_t current_bytes() noexcept { return g_current.load(std::memory_order_relaxed); }
std::size_t peak_bytes() noexcept { return g_peak.load(std::memory_order_relaxed); }
void reset_peak() noexcept { g_peak.store(g_current.load(std::memory_order_relaxed)); }

void* tracked_alloc(std::size_t n) noexcept {
  auto* base = static_cast<unsigned char*>(std::malloc(n + kHeader));
  if (base == nullptr) return nullptr;
  *reinterpret_cast<std::size_t*>(base) = n;
  note_alloc(n);
  return base + kHeader;
}

void tracked_free(void* p) noexcept {
  if (p == nullptr) return;
  auto* base = static_cast<unsigned char*>(p) - kHeader;
  g_current.fetch_sub(*reinterpret_cast<std::size_t*>(base), std::memory_order_relaxed);
  std::free(base);
}

}  // namespace fastgraph::harness::alloc_tracker

namespace tracker = fastgraph::harness::alloc_tracker;

void* operator new(std::size_t n) {
  if (void* p = tracker::tracked_alloc(n)) return p;
  throw std::bad_alloc();
}
void* operator new[](std::size_t n) {
  if (void* p = tracker::tracked_alloc(n)) return p;
  throw std::bad_alloc();
}
void* operator new(std::size_t n, const std::nothrow_t&) noexcept { return tracker::tracked_alloc(n); }
void* operator new[](std::size_t n, const std::nothrow_t&) noexcept { return tracker::tracked_alloc(n); }
void operator delete(void* p) noexcept { tracker::tracked_free(p); }
void operator delete[](void* p) noexcept { tracker::tracked_free(p); }
void operator delete(void* p, std::size_t) noexcept { tracker::tracked_free(p); }
void operator delete[](void* p, std::size_t) noexcept { tracker::tracked_free(p); }
void operator delete(void* p, const std::nothrow_t&) noexcept { tracker::tracked_free(p); }
void operator delete[](void* p, const std::nothrow_t&) noexcept { tracker::tracked_free(p); }
