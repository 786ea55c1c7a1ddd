#include "fastgraph/gravnet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fastgraph/parallel.hpp"
#include "fastgraph/simd/kernels.hpp"

namespace fastgraph {
namespace {

void check_shapes(const FeatureMatrix& features, const NeighborMatrix& neighbors) {
  if (features.n_v != neighbors.n_v ||
      features.values.size() != static_cast<std::size_t>(features.n_v) * features.n_f ||
      neighbors.indices.size() != static_cast<std::size_t>(neighbors.n_v) * neighbors.k ||
      neighbors.dist2.size() != neighbors.indices.size()) {
    throw Error(ErrorCode::ShapeMismatch, "features and neighbor matrix disagree in shape");
  }
  for (Index n : neighbors.indices) {
    if (n < kNoIndex || n >= neighbors.n_v) {
      throw Error(ErrorCode::ShapeMismatch, "neighbor index out of range");
    }
  }
}

int first_slot(const AggregationSpec& spec) { return spec.include_self ? 0 : 1; }

}  // namespace

FeatureMatrix::FeatureMatrix(Index rows, int cols, std::vector<double> data)
    : n_v(rows), n_f(cols), values(std::move(data)) {
  if (values.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorCode::ShapeMismatch, "feature buffer is not rows x cols");
  }
}

void AggregationSpec::validate() const {
  if (!(weight_scale > 0.0)) throw Error(ErrorCode::BadConfig, "weight_scale must be > 0");
  if (num_reducers() == 0) throw Error(ErrorCode::BadConfig, "at least one reducer is required");
}

FeatureMatrix gravnet_aggregate(const FeatureMatrix& features, const NeighborMatrix& neighbors,
                                const AggregationSpec& spec) {
  spec.validate();
  check_shapes(features, neighbors);
  const int n_f = features.n_f;
  const int k = neighbors.k;
  const simd::KernelTable& kern = simd::kernels();

  FeatureMatrix out(features.n_v, n_f * spec.num_reducers());
  parallel_for(static_cast<std::size_t>(features.n_v), [&](std::size_t begin, std::size_t end) {
    for (std::size_t vi = begin; vi < end; ++vi) {
      const Index v = static_cast<Index>(vi);
      const auto idx = neighbors.index_row(v);
      const auto d2 = neighbors.dist_row(v);
      double* mean = out.row(v).data();
      double* max = spec.use_mean ? mean + n_f : mean;

      int valid = 0;
      for (int s = first_slot(spec); s < k; ++s) {
        if (idx[s] < 0) continue;
        const double w = std::exp(-spec.weight_scale * d2[s]);
        const double* f = features.row(idx[s]).data();
        if (spec.use_mean) kern.scaled_add(w, f, mean, n_f);
        if (spec.use_max) {
          if (valid == 0) {
            for (int c = 0; c < n_f; ++c) max[c] = w * f[c];
          } else {
            kern.scaled_max(w, f, max, n_f);
          }
        }
        ++valid;
      }
      if (spec.use_mean && valid > 0) {
        for (int c = 0; c < n_f; ++c) mean[c] /= valid;
      }
    }
  }, 64);
  return out;
}

AggregationGradient gravnet_aggregate_backward(const FeatureMatrix& features,
                                               const NeighborMatrix& neighbors,
                                               const AggregationSpec& spec,
                                               const FeatureMatrix& upstream) {
  spec.validate();
  check_shapes(features, neighbors);
  const int n_f = features.n_f;
  const int k = neighbors.k;
  if (upstream.n_v != features.n_v || upstream.n_f != n_f * spec.num_reducers() ||
      upstream.values.size() != static_cast<std::size_t>(upstream.n_v) * upstream.n_f) {
    throw Error(ErrorCode::ShapeMismatch, "upstream gradient must be n_v x (n_f * reducers)");
  }

  AggregationGradient grad{FeatureMatrix(features.n_v, n_f),
                           std::vector<double>(neighbors.dist2.size(), 0.0)};
  std::vector<double> weight(static_cast<std::size_t>(k));
  std::vector<int> best_slot(static_cast<std::size_t>(n_f));

  // Serial in vertex order: feature gradients scatter into neighbor rows and
  // the fixed order keeps the sums reproducible.
  for (Index v = 0; v < features.n_v; ++v) {
    const auto idx = neighbors.index_row(v);
    const auto d2 = neighbors.dist_row(v);
    const auto up = upstream.row(v);
    double* g_d2 = grad.grad_dist2.data() + static_cast<std::size_t>(v) * k;

    int valid = 0;
    for (int s = first_slot(spec); s < k; ++s) {
      if (idx[s] < 0) continue;
      weight[s] = std::exp(-spec.weight_scale * d2[s]);
      ++valid;
    }
    if (valid == 0) continue;

    if (spec.use_mean) {
      const double inv = 1.0 / valid;
      for (int s = first_slot(spec); s < k; ++s) {
        if (idx[s] < 0) continue;
        const auto f = features.row(idx[s]);
        auto gf = grad.grad_features.row(idx[s]);
        double dot = 0.0;
        for (int c = 0; c < n_f; ++c) {
          gf[c] += up[c] * weight[s] * inv;
          dot += up[c] * f[c];
        }
        g_d2[s] += -spec.weight_scale * weight[s] * dot * inv;
      }
    }

    if (spec.use_max) {
      const auto up_max = up.subspan(spec.use_mean ? n_f : 0, n_f);
      std::fill(best_slot.begin(), best_slot.end(), -1);
      for (int s = first_slot(spec); s < k; ++s) {
        if (idx[s] < 0) continue;
        const auto f = features.row(idx[s]);
        for (int c = 0; c < n_f; ++c) {
          const int b = best_slot[c];
          if (b < 0 || weight[s] * f[c] > weight[b] * features.row(idx[b])[c]) best_slot[c] = s;
        }
      }
      for (int c = 0; c < n_f; ++c) {
        const int s = best_slot[c];
        const double fc = features.row(idx[s])[c];
        grad.grad_features.row(idx[s])[c] += up_max[c] * weight[s];
        g_d2[s] += -spec.weight_scale * weight[s] * fc * up_max[c];
      }
    }
  }
  return grad;
}

}  // namespace fastgraph
