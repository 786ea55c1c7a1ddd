#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "fastgraph/binning.hpp"
#include "fastgraph/core.hpp"

namespace fastgraph {

/// Enumerates the in-bounds cells on the surface of the (2d+1)^N hypercube
/// centred on a cell, i.e. the cells at Chebyshev distance exactly d.
/// Output order is ascending position within the cube, last dimension
/// fastest. One instance per query; not shared between threads.
///
/// The cursor walks only the part of the cube that lies inside the grid and
/// jumps over interior runs of the last dimension, so the cost of a ring is
/// proportional to its clipped surface rather than to (2d+1)^N.
class BinStepper {
 public:
  BinStepper(std::span<const int> bin_counts, std::span<const int> center_cells);

  /// Restarts enumeration on the ring of radius d.
  void set_radius(int d);

  /// Next local flat cell id on the current ring, or nullopt once the cube
  /// is exhausted.
  std::optional<Index> step();

  int radius() const noexcept { return radius_; }
  std::int64_t side_len() const noexcept { return side_len_; }
  std::int64_t cube_cap() const noexcept { return cube_cap_; }
  int rank() const noexcept { return n_; }

 private:
  std::array<int, kMaxBinDims> counts_{};
  std::array<int, kMaxBinDims> center_{};
  int n_ = 0;
  int radius_ = 0;
  std::int64_t side_len_ = 1;
  std::int64_t cube_cap_ = 1;
  std::array<int, kMaxBinDims> lo_{};
  std::array<int, kMaxBinDims> hi_{};
  std::array<int, kMaxBinDims> cursor_{};
  bool done_ = false;

  void advance() noexcept;
  bool at_extreme(int dim) const noexcept {
    const int off = cursor_[dim] - center_[dim];
    return off == radius_ || off == -radius_;
  }
};

}  // namespace fastgraph
