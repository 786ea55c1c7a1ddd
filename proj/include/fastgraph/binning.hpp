#pragma once

// Uniform-grid preprocessing: bin-count heuristic, per-vertex cell
// assignment within each row split, stable counting sort by cell and
// cumulative cell boundaries.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fastgraph/core.hpp"

namespace fastgraph {

inline constexpr int kMinBinDims = 2;
inline constexpr int kMaxBinDims = 5;
inline constexpr int kMinBinsPerDim = 5;
inline constexpr int kMaxBinsPerDim = 30;

struct BinningConfig {
  int k_target = 1;
  int d_bin = 2;
  std::optional<int> n_bins_override{};

  /// Throws BadConfig when d_bin is outside [2,5], k_target < 1 or the
  /// override is < 1.
  void validate() const;

  /// d_bin = min(n_c, 5); throws TooFewDims when n_c < 2.
  static BinningConfig for_cloud(const PointCloud& cloud, int k_target);
};

/// floor((32 * n_elems / k_target)^(1/d_bin)) clamped to [5, 30].
int compute_n_bins(double n_elems, int k_target, int d_bin);

/// Row-major flat id, last dimension fastest. Throws OutOfRange.
Index flatten_cell(std::span<const int> cells, std::span<const int> bin_counts);

/// Inverse of flatten_cell for 0 <= flat < prod(bin_counts).
void unflatten_cell(Index flat, std::span<const int> bin_counts, std::span<int> cells);

struct BinIndex {
  int d_bin = 0;
  std::size_t n_splits = 0;
  Index cells_per_split = 0;  // prod(bin_counts)

  std::vector<int> bin_counts;     // d_bin
  std::vector<double> bin_widths;  // n_splits x d_bin, per-split grid
  std::vector<double> dim_mins;    // n_splits x d_bin, per-split origin
  std::vector<Index> bin_idx;      // n_v, global flat cell id
  std::vector<Index> sort_order;   // n_v, vertices grouped by cell, stable
  std::vector<Index> bin_bounds;   // n_splits * cells_per_split + 1

  // Absolute slack subtracted from the ring lower bound to absorb rounding
  // in cell assignment, per split.
  std::vector<double> cert_slack;

  Index n_v = 0;
  int n_c = 0;
  std::uint64_t source_fingerprint = 0;

  std::span<const double> widths(std::size_t split) const {
    return std::span<const double>(bin_widths).subspan(split * d_bin, d_bin);
  }
  std::span<const double> mins(std::size_t split) const {
    return std::span<const double>(dim_mins).subspan(split * d_bin, d_bin);
  }
  double min_width(std::size_t split) const;

  Index total_cells() const noexcept {
    return static_cast<Index>(bin_bounds.size()) - 1;
  }

  /// Vertices of one global cell, as a slice of sort_order.
  std::span<const Index> cell_members(Index global_cell) const {
    return std::span<const Index>(sort_order)
        .subspan(bin_bounds[global_cell], bin_bounds[global_cell + 1] - bin_bounds[global_cell]);
  }

  /// Bytes held by the index arrays.
  std::size_t memory_bytes() const noexcept;
};

BinIndex build_bin_index(const PointCloud& cloud, const BinningConfig& cfg);

}  // namespace fastgraph
