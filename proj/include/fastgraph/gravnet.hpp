#pragma once

// Distance-weighted neighbor aggregation over a kNN graph. Each valid slot k
// of vertex v contributes w_vk * features[n_vk] with
// w_vk = exp(-weight_scale * dist2[v][k]); the reducers are applied over the
// valid slots (slot 0 only when include_self is set).

#include <span>
#include <vector>

#include "fastgraph/core.hpp"

namespace fastgraph {

struct FeatureMatrix {
  Index n_v = 0;
  int n_f = 0;
  std::vector<double> values;  // n_v x n_f

  FeatureMatrix() = default;
  FeatureMatrix(Index rows, int cols, double fill = 0.0)
      : n_v(rows), n_f(cols), values(static_cast<std::size_t>(rows) * cols, fill) {}
  FeatureMatrix(Index rows, int cols, std::vector<double> data);

  std::span<const double> row(Index v) const {
    return std::span<const double>(values).subspan(static_cast<std::size_t>(v) * n_f, n_f);
  }
  std::span<double> row(Index v) {
    return std::span<double>(values).subspan(static_cast<std::size_t>(v) * n_f, n_f);
  }
};

struct AggregationSpec {
  double weight_scale = 10.0;
  bool use_mean = true;
  bool use_max = true;
  bool include_self = true;

  /// Throws BadConfig for a non-positive scale or an empty reducer set.
  void validate() const;
  int num_reducers() const noexcept { return int(use_mean) + int(use_max); }
};

/// Output is n_v x (n_f * reducers), mean block before max block. The mean
/// divides by the number of valid slots; rows without valid slots are zero.
FeatureMatrix gravnet_aggregate(const FeatureMatrix& features, const NeighborMatrix& neighbors,
                                const AggregationSpec& spec);

struct AggregationGradient {
  FeatureMatrix grad_features;     // n_v x n_f
  std::vector<double> grad_dist2;  // n_v x K, chainable into knn_backward
};

/// Max routes each output element to its argmax slot only, ties to the
/// lowest slot index.
AggregationGradient gravnet_aggregate_backward(const FeatureMatrix& features,
                                               const NeighborMatrix& neighbors,
                                               const AggregationSpec& spec,
                                               const FeatureMatrix& upstream);

}  // namespace fastgraph
