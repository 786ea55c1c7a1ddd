#include "fastgraph/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fastgraph/parallel.hpp"

namespace fastgraph {
namespace {

// x^d for small non-negative integers, exact in double up to 30^5.
double ipow(double x, int d) {
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= x;
  return r;
}

}  // namespace

void BinningConfig::validate() const {
  if (k_target < 1) throw Error(ErrorCode::BadConfig, "k_target must be >= 1");
  if (d_bin < kMinBinDims || d_bin > kMaxBinDims) {
    throw Error(ErrorCode::BadConfig,
                "binning dimensions must lie in [2,5], got " + std::to_string(d_bin));
  }
  if (n_bins_override && *n_bins_override < 1) {
    throw Error(ErrorCode::BadConfig, "bin count override must be >= 1");
  }
}

BinningConfig BinningConfig::for_cloud(const PointCloud& cloud, int k_target) {
  if (cloud.num_dims() < kMinBinDims) {
    throw Error(ErrorCode::TooFewDims, "binning needs at least 2 coordinate dimensions");
  }
  return BinningConfig{k_target, std::min(cloud.num_dims(), kMaxBinDims), std::nullopt};
}

int compute_n_bins(double n_elems, int k_target, int d_bin) {
  const double x = 32.0 * n_elems / static_cast<double>(k_target);
  double root = std::floor(std::pow(x, 1.0 / d_bin));
  // pow() may land one ulp below an exact integer root; settle on the true floor.
  while (ipow(root + 1.0, d_bin) <= x) root += 1.0;
  while (root > 0.0 && ipow(root, d_bin) > x) root -= 1.0;
  return static_cast<int>(
      std::clamp(root, static_cast<double>(kMinBinsPerDim), static_cast<double>(kMaxBinsPerDim)));
}

Index flatten_cell(std::span<const int> cells, std::span<const int> bin_counts) {
  if (cells.size() != bin_counts.size()) {
    throw Error(ErrorCode::OutOfRange, "cell and bin-count ranks differ");
  }
  Index flat = 0;
  Index mul = 1;
  for (std::size_t i = cells.size(); i-- > 0;) {
    if (cells[i] < 0 || cells[i] >= bin_counts[i]) {
      throw Error(ErrorCode::OutOfRange, "cell coordinate " + std::to_string(cells[i]) +
                                             " outside [0, " + std::to_string(bin_counts[i]) + ")");
    }
    flat += cells[i] * mul;
    mul *= bin_counts[i];
  }
  return flat;
}

void unflatten_cell(Index flat, std::span<const int> bin_counts, std::span<int> cells) {
  for (std::size_t i = bin_counts.size(); i-- > 0;) {
    cells[i] = flat % bin_counts[i];
    flat /= bin_counts[i];
  }
}

double BinIndex::min_width(std::size_t split) const {
  auto w = widths(split);
  return *std::min_element(w.begin(), w.end());
}

std::size_t BinIndex::memory_bytes() const noexcept {
  return bin_counts.size() * sizeof(int) +
         (bin_widths.size() + dim_mins.size() + cert_slack.size()) * sizeof(double) +
         (bin_idx.size() + sort_order.size() + bin_bounds.size()) * sizeof(Index);
}

BinIndex build_bin_index(const PointCloud& cloud, const BinningConfig& cfg) {
  cfg.validate();
  if (cloud.num_dims() < cfg.d_bin) {
    throw Error(ErrorCode::TooFewDims, "cloud has " + std::to_string(cloud.num_dims()) +
                                           " dimensions, binning needs " +
                                           std::to_string(cfg.d_bin));
  }

  const RowSplits& rs = cloud.row_splits();
  const Index n_v = cloud.num_vertices();
  const std::size_t n_splits = rs.num_splits();
  const int d_bin = cfg.d_bin;

  int n_bins = 0;
  if (cfg.n_bins_override) {
    n_bins = *cfg.n_bins_override;
  } else {
    const double n_elems = std::max(1.0, static_cast<double>(n_v) / static_cast<double>(n_splits));
    n_bins = compute_n_bins(n_elems, cfg.k_target, d_bin);
  }

  const double cells_real = ipow(n_bins, d_bin);
  if (cells_real * static_cast<double>(n_splits) + 1.0 >
      static_cast<double>(std::numeric_limits<Index>::max())) {
    throw Error(ErrorCode::BadConfig, "grid has too many cells for 32-bit bin bounds");
  }

  BinIndex index;
  index.d_bin = d_bin;
  index.n_splits = n_splits;
  index.bin_counts.assign(d_bin, n_bins);
  index.cells_per_split = static_cast<Index>(cells_real);
  index.bin_widths.assign(n_splits * d_bin, 1.0);
  index.dim_mins.assign(n_splits * d_bin, 0.0);
  index.cert_slack.assign(n_splits, 0.0);
  index.n_v = n_v;
  index.n_c = cloud.num_dims();
  index.source_fingerprint = cloud.fingerprint();

  // Per-split extents.
  parallel_for(
      n_splits,
      [&](std::size_t s_begin, std::size_t s_end) {
        std::vector<double> lo(d_bin), hi(d_bin);
        for (std::size_t s = s_begin; s < s_end; ++s) {
          if (rs.size(s) == 0) continue;
          std::fill(lo.begin(), lo.end(), std::numeric_limits<double>::infinity());
          std::fill(hi.begin(), hi.end(), -std::numeric_limits<double>::infinity());
          for (Index v = rs.begin(s); v < rs.end(s); ++v) {
            for (int i = 0; i < d_bin; ++i) {
              lo[i] = std::min(lo[i], cloud.at(v, i));
              hi[i] = std::max(hi[i], cloud.at(v, i));
            }
          }
          double magnitude = 0.0;
          for (int i = 0; i < d_bin; ++i) {
            index.dim_mins[s * d_bin + i] = lo[i];
            // A flat dimension keeps unit width; every point lands in cell 0.
            index.bin_widths[s * d_bin + i] = hi[i] > lo[i] ? (hi[i] - lo[i]) / n_bins : 1.0;
            magnitude = std::max({magnitude, std::abs(lo[i]), std::abs(hi[i])});
          }
          index.cert_slack[s] = 16.0 * std::numeric_limits<double>::epsilon() * magnitude;
        }
      },
      1);

  // Cell assignment.
  index.bin_idx.resize(n_v);
  for (std::size_t s = 0; s < n_splits; ++s) {
    const Index first = rs.begin(s);
    const Index offset = static_cast<Index>(s) * index.cells_per_split;
    const auto mins = index.mins(s);
    const auto widths = index.widths(s);
    parallel_for(static_cast<std::size_t>(rs.size(s)), [&](std::size_t b, std::size_t e) {
      for (std::size_t j = b; j < e; ++j) {
        const Index v = first + static_cast<Index>(j);
        Index flat = 0;
        for (int i = 0; i < d_bin; ++i) {
          const double rel = std::floor((cloud.at(v, i) - mins[i]) / widths[i]);
          const int cell = static_cast<int>(std::clamp(rel, 0.0, static_cast<double>(n_bins - 1)));
          flat = flat * n_bins + cell;
        }
        index.bin_idx[v] = offset + flat;
      }
    });
  }

  // Stable counting sort. bin_bounds first holds per-cell end offsets; the
  // descending placement pass walks each back to its cell's start.
  const Index total = static_cast<Index>(n_splits) * index.cells_per_split;
  index.bin_bounds.assign(static_cast<std::size_t>(total) + 1, 0);
  for (Index v = 0; v < n_v; ++v) ++index.bin_bounds[index.bin_idx[v]];
  Index running = 0;
  for (Index c = 0; c < total; ++c) {
    running += index.bin_bounds[c];
    index.bin_bounds[c] = running;
  }
  index.bin_bounds[total] = n_v;
  index.sort_order.resize(n_v);
  for (Index v = n_v; v-- > 0;) index.sort_order[--index.bin_bounds[index.bin_idx[v]]] = v;

  return index;
}

}  // namespace fastgraph
