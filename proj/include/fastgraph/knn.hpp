#pragma once

// Exact k-nearest-neighbor search within row splits.
//
// Every result row starts with the query itself at slot 0 (distance 0);
// slots 1..K-1 hold the K-1 nearest eligible candidates of the same split in
// replacement order (not sorted). Rows with fewer candidates are padded with
// (-1, 0). Distances are squared Euclidean over all n_c dimensions.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fastgraph/binning.hpp"
#include "fastgraph/core.hpp"

namespace fastgraph {

struct KnnOptions {
  int k = 1;
  std::optional<DirectionMask> mask{};
  /// Candidates farther than this squared distance are ignored.
  std::optional<double> max_radius2{};
  /// Debug: visit every ring of the grid instead of stopping at the
  /// certificate. Results must not change.
  bool exhaustive_rings = false;

  /// Throws BadK or BadConfig.
  void validate(Index n_v) const;
};

NeighborMatrix binned_select_knn(const PointCloud& cloud, const BinIndex& index,
                                 const KnnOptions& opts);

/// Full per-split scan; the verification oracle.
NeighborMatrix brute_force_knn(const PointCloud& cloud, const KnnOptions& opts);

struct DistanceGradient {
  Index n_v = 0;
  int n_c = 0;
  std::vector<double> grad_coords;  // n_v x n_c

  double at(Index v, int c) const { return grad_coords[static_cast<std::size_t>(v) * n_c + c]; }
};

/// Gradient of sum(upstream[v][k] * dist2[v][k]) with respect to the
/// coordinates, holding the neighbor selection fixed. upstream is n_v x K.
/// Summation order is fixed, so the result does not depend on thread count.
DistanceGradient knn_backward(const PointCloud& cloud, const NeighborMatrix& result,
                              std::span<const double> upstream);

struct KnnWithGrad {
  NeighborMatrix result;
  /// Calls knn_backward on `result`. Keeps a reference to the cloud, which
  /// must outlive the closure.
  std::function<DistanceGradient(std::span<const double>)> backward;
};

KnnWithGrad knn_with_grad(const PointCloud& cloud, const BinIndex& index, const KnnOptions& opts);

}  // namespace fastgraph
