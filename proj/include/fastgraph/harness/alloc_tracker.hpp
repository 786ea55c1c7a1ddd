#pragma once

#include <cstddef>

// Process-wide heap accounting. Linking the harness library replaces the
// global operator new/delete with counting versions.
namespace fastgraph::harness::alloc_tracker {

std::size_t current_bytes() noexcept;
std::size_t peak_bytes() noexcept;

/// Sets the peak to the current level so a following region can be measured.
void reset_peak() noexcept;

/// Peak bytes above `baseline` observed since the last reset_peak().
inline std::size_t peak_above(std::size_t baseline) noexcept {
  const std::size_t peak = peak_bytes();
  return peak > baseline ? peak - baseline : 0;
}

}  // namespace fastgraph::harness::alloc_tracker
