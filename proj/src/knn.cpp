#include "fastgraph/knn.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <string>

#include "fastgraph/parallel.hpp"
#include "fastgraph/simd/kernels.hpp"
#include "fastgraph/stepper.hpp"

namespace fastgraph {
namespace {

constexpr std::size_t kDistBlock = 256;

// Maintains one result row: self at slot 0, then fill-then-replace-the-max
// with a linear rescan after each replacement.
class RowSelector {
 public:
  RowSelector(std::span<Index> idx, std::span<double> d2, Index self)
      : idx_(idx), d2_(d2), k_(static_cast<int>(idx.size())) {
    std::fill(idx_.begin(), idx_.end(), kNoIndex);
    std::fill(d2_.begin(), d2_.end(), 0.0);
    idx_[0] = self;
  }

  void offer(Index u, double d2) {
    if (filled_ < k_) {
      idx_[filled_] = u;
      d2_[filled_] = d2;
      if (d2 > max_d2_) {
        max_slot_ = filled_;
        max_d2_ = d2;
      }
      ++filled_;
    } else if (d2 < max_d2_) {
      idx_[max_slot_] = u;
      d2_[max_slot_] = d2;
      rescan();
    }
  }

  bool full() const noexcept { return filled_ == k_; }
  double max_d2() const noexcept { return max_d2_; }

 private:
  void rescan() {
    max_slot_ = 0;
    max_d2_ = d2_[0];
    for (int s = 1; s < k_; ++s) {
      if (d2_[s] > max_d2_) {
        max_slot_ = s;
        max_d2_ = d2_[s];
      }
    }
  }

  std::span<Index> idx_;
  std::span<double> d2_;
  int k_;
  int filled_ = 1;
  int max_slot_ = 0;
  double max_d2_ = 0.0;
};

struct CandidateFilter {
  const DirectionMask* mask;
  const double* max_radius2;

  bool accept(Index u, Index self, double d2) const noexcept {
    if (u == self) return false;
    if (mask != nullptr && !mask->is_candidate(u)) return false;
    if (max_radius2 != nullptr && d2 > *max_radius2) return false;
    return true;
  }
};

CandidateFilter make_filter(const KnnOptions& opts) {
  const DirectionMask* mask = (opts.mask && opts.mask->enabled) ? &*opts.mask : nullptr;
  const double* r2 = opts.max_radius2 ? &*opts.max_radius2 : nullptr;
  return CandidateFilter{mask, r2};
}

bool is_active_query(const KnnOptions& opts, Index v) {
  return !opts.mask || opts.mask->is_query(v);
}

void write_skipped_row(NeighborMatrix& out, Index v) {
  auto idx = out.index_row(v);
  auto d2 = out.dist_row(v);
  std::fill(idx.begin(), idx.end(), kNoIndex);
  std::fill(d2.begin(), d2.end(), 0.0);
  idx[0] = v;
}

}  // namespace

void KnnOptions::validate(Index n_v) const {
  if (k < 1) throw Error(ErrorCode::BadK, "k must be >= 1, got " + std::to_string(k));
  if (mask && mask->dir.size() != static_cast<std::size_t>(n_v)) {
    throw Error(ErrorCode::ShapeMismatch, "direction mask length differs from vertex count");
  }
  if (max_radius2 && !(*max_radius2 > 0.0)) {
    throw Error(ErrorCode::BadConfig, "max_radius2 must be > 0");
  }
}

NeighborMatrix binned_select_knn(const PointCloud& cloud, const BinIndex& index,
                                 const KnnOptions& opts) {
  opts.validate(cloud.num_vertices());
  if (index.n_v != cloud.num_vertices() || index.n_c != cloud.num_dims() ||
      index.n_splits != cloud.row_splits().num_splits() ||
      index.source_fingerprint != cloud.fingerprint()) {
    throw Error(ErrorCode::IndexMismatch, "bin index was not built from this point cloud");
  }

  const Index n_v = cloud.num_vertices();
  const int n_c = cloud.num_dims();
  const int d_bin = index.d_bin;
  const double* coords = cloud.coords().data();
  const simd::KernelTable& kern = simd::kernels();
  const CandidateFilter filter = make_filter(opts);

  NeighborMatrix out(n_v, opts.k);

  // Queries walk the cell-sorted order so neighboring queries share cache lines.
  parallel_for(static_cast<std::size_t>(n_v), [&](std::size_t begin, std::size_t end) {
    std::array<double, kDistBlock> dist{};
    std::array<int, kMaxBinDims> center{};
    for (std::size_t pos = begin; pos < end; ++pos) {
      const Index v = index.sort_order[pos];
      if (!is_active_query(opts, v)) {
        write_skipped_row(out, v);
        continue;
      }
      RowSelector row(out.index_row(v), out.dist_row(v), v);

      const std::size_t split = static_cast<std::size_t>(index.bin_idx[v] / index.cells_per_split);
      const Index cell_offset = static_cast<Index>(split) * index.cells_per_split;
      unflatten_cell(index.bin_idx[v] - cell_offset, index.bin_counts,
                     std::span<int>(center.data(), d_bin));

      // Beyond this radius every ring lies entirely outside the grid.
      int max_radius = 0;
      for (int i = 0; i < d_bin; ++i) {
        max_radius = std::max({max_radius, center[i], index.bin_counts[i] - 1 - center[i]});
      }
      const double width = index.min_width(split);
      const double slack = index.cert_slack[split];
      const double* query = coords + static_cast<std::size_t>(v) * n_c;

      BinStepper stepper(index.bin_counts, std::span<const int>(center.data(), d_bin));
      for (int radius = 0; radius <= max_radius; ++radius) {
        stepper.set_radius(radius);
        while (auto local = stepper.step()) {
          const auto members = index.cell_members(cell_offset + *local);
          for (std::size_t off = 0; off < members.size(); off += kDistBlock) {
            const std::size_t count = std::min(kDistBlock, members.size() - off);
            kern.sq_dist_gather(coords, n_c, query, members.data() + off, count, dist.data());
            for (std::size_t j = 0; j < count; ++j) {
              const Index u = members[off + j];
              if (filter.accept(u, v, dist[j])) row.offer(u, dist[j]);
            }
          }
        }
        if (opts.exhaustive_rings) continue;
        // Every unvisited cell is at least `radius` whole cells away along
        // some binned axis, and the binned subspace distance lower-bounds
        // the full distance.
        const double bound = radius * width - slack;
        if (bound <= 0.0) continue;
        const double bound2 = bound * bound;
        if (row.full() && bound2 > row.max_d2()) break;
        if (filter.max_radius2 != nullptr && bound2 > *filter.max_radius2) break;
      }
    }
  }, 64);

  return out;
}

NeighborMatrix brute_force_knn(const PointCloud& cloud, const KnnOptions& opts) {
  opts.validate(cloud.num_vertices());
  const Index n_v = cloud.num_vertices();
  const int n_c = cloud.num_dims();
  const double* coords = cloud.coords().data();
  const RowSplits& rs = cloud.row_splits();
  const simd::KernelTable& kern = simd::kernels();
  const CandidateFilter filter = make_filter(opts);

  NeighborMatrix out(n_v, opts.k);
  parallel_for(static_cast<std::size_t>(n_v), [&](std::size_t begin, std::size_t end) {
    std::array<double, kDistBlock> dist{};
    for (std::size_t vi = begin; vi < end; ++vi) {
      const Index v = static_cast<Index>(vi);
      if (!is_active_query(opts, v)) {
        write_skipped_row(out, v);
        continue;
      }
      RowSelector row(out.index_row(v), out.dist_row(v), v);
      const std::size_t split = rs.split_of(v);
      const double* query = coords + static_cast<std::size_t>(v) * n_c;
      for (Index first = rs.begin(split); first < rs.end(split);) {
        const std::size_t count =
            std::min<std::size_t>(kDistBlock, static_cast<std::size_t>(rs.end(split) - first));
        kern.sq_dist_range(coords, n_c, query, first, count, dist.data());
        for (std::size_t j = 0; j < count; ++j) {
          const Index u = first + static_cast<Index>(j);
          if (filter.accept(u, v, dist[j])) row.offer(u, dist[j]);
        }
        first += static_cast<Index>(count);
      }
    }
  }, 16);
  return out;
}

DistanceGradient knn_backward(const PointCloud& cloud, const NeighborMatrix& result,
                              std::span<const double> upstream) {
  const Index n_v = cloud.num_vertices();
  const int n_c = cloud.num_dims();
  const int k = result.k;
  if (result.n_v != n_v || result.indices.size() != static_cast<std::size_t>(n_v) * k) {
    throw Error(ErrorCode::ShapeMismatch, "neighbor matrix does not match the point cloud");
  }
  if (upstream.size() != result.indices.size()) {
    throw Error(ErrorCode::ShapeMismatch, "upstream gradient must be n_v x K");
  }
  for (Index n : result.indices) {
    if (n < kNoIndex || n >= n_v) throw Error(ErrorCode::ShapeMismatch, "neighbor index out of range");
  }

  // Incoming edges per vertex, listed in ascending (v, k) slot order.
  std::vector<Index> in_offsets(static_cast<std::size_t>(n_v) + 1, 0);
  for (std::size_t slot = 0; slot < result.indices.size(); ++slot) {
    const Index n = result.indices[slot];
    const Index v = static_cast<Index>(slot / k);
    if (n >= 0 && n != v) ++in_offsets[n + 1];
  }
  for (Index v = 0; v < n_v; ++v) in_offsets[v + 1] += in_offsets[v];
  std::vector<std::size_t> in_slots(static_cast<std::size_t>(in_offsets[n_v]));
  {
    std::vector<Index> cursor(in_offsets.begin(), in_offsets.end() - 1);
    for (std::size_t slot = 0; slot < result.indices.size(); ++slot) {
      const Index n = result.indices[slot];
      const Index v = static_cast<Index>(slot / k);
      if (n >= 0 && n != v) in_slots[cursor[n]++] = slot;
    }
  }

  DistanceGradient grad{n_v, n_c, std::vector<double>(static_cast<std::size_t>(n_v) * n_c, 0.0)};
  parallel_for(static_cast<std::size_t>(n_v), [&](std::size_t begin, std::size_t end) {
    for (std::size_t ui = begin; ui < end; ++ui) {
      const Index u = static_cast<Index>(ui);
      double* g = grad.grad_coords.data() + ui * n_c;
      const auto xu = cloud.point(u);
      // As query: d/dx_u of up * |x_u - x_n|^2.
      const auto row = result.index_row(u);
      for (int s = 0; s < k; ++s) {
        const Index n = row[s];
        if (n < 0 || n == u) continue;
        const double w = 2.0 * upstream[ui * k + s];
        const auto xn = cloud.point(n);
        for (int c = 0; c < n_c; ++c) g[c] += w * (xu[c] - xn[c]);
      }
      // As neighbor of other queries.
      for (Index e = in_offsets[u]; e < in_offsets[u + 1]; ++e) {
        const std::size_t slot = in_slots[e];
        const Index v = static_cast<Index>(slot / k);
        const double w = 2.0 * upstream[slot];
        const auto xv = cloud.point(v);
        for (int c = 0; c < n_c; ++c) g[c] += w * (xu[c] - xv[c]);
      }
    }
  });
  return grad;
}

KnnWithGrad knn_with_grad(const PointCloud& cloud, const BinIndex& index, const KnnOptions& opts) {
  KnnWithGrad out;
  out.result = binned_select_knn(cloud, index, opts);
  auto captured = std::make_shared<const NeighborMatrix>(out.result);
  out.backward = [&cloud, captured](std::span<const double> upstream) {
    return knn_backward(cloud, *captured, upstream);
  };
  return out;
}

}  // namespace fastgraph
