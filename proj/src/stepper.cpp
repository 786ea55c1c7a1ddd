#include "fastgraph/stepper.hpp"

#include <algorithm>
#include <string>

namespace fastgraph {

BinStepper::BinStepper(std::span<const int> bin_counts, std::span<const int> center_cells) {
  if (bin_counts.size() != center_cells.size() || bin_counts.size() < kMinBinDims ||
      bin_counts.size() > kMaxBinDims) {
    throw Error(ErrorCode::BadConfig,
                "stepper rank must be in [2,5], got " + std::to_string(bin_counts.size()));
  }
  n_ = static_cast<int>(bin_counts.size());
  for (int i = 0; i < n_; ++i) {
    if (center_cells[i] < 0 || center_cells[i] >= bin_counts[i]) {
      throw Error(ErrorCode::OutOfRange, "stepper centre lies outside the grid");
    }
    counts_[i] = bin_counts[i];
    center_[i] = center_cells[i];
  }
  set_radius(0);
}

void BinStepper::set_radius(int d) {
  radius_ = d;
  side_len_ = 2 * static_cast<std::int64_t>(d) + 1;
  cube_cap_ = 1;
  for (int i = 0; i < n_; ++i) cube_cap_ *= side_len_;
  for (int i = 0; i < n_; ++i) {
    lo_[i] = std::max(0, center_[i] - d);
    hi_[i] = std::min(counts_[i] - 1, center_[i] + d);
    cursor_[i] = lo_[i];
  }
  done_ = false;
}

// Odometer increment over the clipped box, last dimension fastest.
void BinStepper::advance() noexcept {
  for (int i = n_ - 1; i >= 0; --i) {
    if (cursor_[i] < hi_[i]) {
      ++cursor_[i];
      for (int j = i + 1; j < n_; ++j) cursor_[j] = lo_[j];
      return;
    }
  }
  done_ = true;
}

std::optional<Index> BinStepper::step() {
  const int last = n_ - 1;
  while (!done_) {
    bool on_surface = at_extreme(last);
    for (int i = 0; i < last && !on_surface; ++i) on_surface = at_extreme(i);
    if (on_surface) {
      Index flat = 0;
      for (int i = 0; i < n_; ++i) flat = flat * counts_[i] + cursor_[i];
      advance();
      return flat;
    }
    // Interior so far: only the far face of the last dimension can follow.
    const int far = center_[last] + radius_;
    if (far <= hi_[last]) {
      cursor_[last] = far;
    } else {
      cursor_[last] = hi_[last];
      advance();
    }
  }
  return std::nullopt;
}

}  // namespace fastgraph
