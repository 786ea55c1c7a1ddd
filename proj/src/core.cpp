#include "fastgraph/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace fastgraph {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonMonotonic: return "NonMonotonic";
    case ErrorCode::BadBounds: return "BadBounds";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TooFewDims: return "TooFewDims";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BadCapacity: return "BadCapacity";
    case ErrorCode::BadShape: return "BadShape";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

RowSplits RowSplits::validate(std::vector<Index> offsets, Index n_v) {
  if (offsets.empty()) {
    throw Error(ErrorCode::BadBounds, "row splits must contain at least one offset");
  }
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    if (offsets[i] < offsets[i - 1]) {
      throw Error(ErrorCode::NonMonotonic,
                  "offset " + std::to_string(i) + " decreases (" + std::to_string(offsets[i - 1]) +
                      " -> " + std::to_string(offsets[i]) + ")");
    }
  }
  if (offsets.front() != 0 || offsets.back() != n_v) {
    throw Error(ErrorCode::BadBounds, "row splits must span [0, " + std::to_string(n_v) + ")");
  }
  return RowSplits(std::move(offsets));
}

RowSplits RowSplits::single(Index n_v) { return RowSplits({0, n_v}); }

Index RowSplits::max_split_size() const noexcept {
  Index best = 0;
  for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
    best = std::max(best, offsets_[i + 1] - offsets_[i]);
  }
  return best;
}

std::size_t RowSplits::split_of(Index v) const {
  if (v < 0 || v >= num_vertices()) {
    throw Error(ErrorCode::OutOfRange, "vertex " + std::to_string(v) + " outside [0, " +
                                           std::to_string(num_vertices()) + ")");
  }
  // First offset strictly greater than v closes the owning split; empty
  // splits share an offset and are skipped by upper_bound.
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), v);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

RowSplits validate_row_splits(std::vector<Index> offsets, Index n_v) {
  return RowSplits::validate(std::move(offsets), n_v);
}

std::size_t split_of_vertex(const RowSplits& rs, Index v) { return rs.split_of(v); }

PointCloud::PointCloud(std::vector<double> coords, int n_c, RowSplits row_splits)
    : coords_(std::move(coords)), n_c_(n_c), row_splits_(std::move(row_splits)) {
  if (n_c_ < 1) {
    throw Error(ErrorCode::BadShape, "point cloud needs at least one coordinate dimension");
  }
  if (coords_.size() % static_cast<std::size_t>(n_c_) != 0) {
    throw Error(ErrorCode::BadShape, "coordinate buffer is not a multiple of n_c");
  }
  n_v_ = static_cast<Index>(coords_.size() / static_cast<std::size_t>(n_c_));
  if (row_splits_.num_vertices() != n_v_) {
    throw Error(ErrorCode::BadBounds, "row splits cover " +
                                          std::to_string(row_splits_.num_vertices()) +
                                          " vertices, cloud has " + std::to_string(n_v_));
  }
  for (double x : coords_) {
    if (!std::isfinite(x)) throw Error(ErrorCode::BadShape, "non-finite coordinate");
  }
}

std::uint64_t PointCloud::fingerprint() const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(n_v_));
  mix(static_cast<std::uint64_t>(n_c_));
  for (Index off : row_splits_.offsets()) mix(static_cast<std::uint64_t>(off));
  for (double x : coords_) mix(std::bit_cast<std::uint64_t>(x));
  return h;
}

NeighborMatrix::NeighborMatrix(Index n_v_in, int k_in)
    : n_v(n_v_in),
      k(k_in),
      indices(static_cast<std::size_t>(n_v_in) * k_in, kNoIndex),
      dist2(static_cast<std::size_t>(n_v_in) * k_in, 0.0) {}

DirectionMask::DirectionMask(std::vector<std::uint8_t> values, bool enabled_in)
    : dir(std::move(values)), enabled(enabled_in) {
  for (std::uint8_t d : dir) {
    if (d > 3) throw Error(ErrorCode::BadConfig, "direction flags must be in {0,1,2,3}");
  }
}

}  // namespace fastgraph
