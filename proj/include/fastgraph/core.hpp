#pragma once

// Core data types for batched ragged point clouds and neighbor results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastgraph {

/// Signed vertex index; -1 marks an absent neighbor or a padding slot.
using Index = std::int32_t;

inline constexpr Index kNoIndex = -1;

enum class ErrorCode {
  NonMonotonic,
  BadBounds,
  OutOfRange,
  TooFewDims,
  BadConfig,
  IndexMismatch,
  BadK,
  ShapeMismatch,
  BadCapacity,
  BadShape,
  IoError,
  VerificationFailed,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Offsets partitioning a concatenated batch into independent graphs.
/// Split i owns the half-open vertex interval [offsets[i], offsets[i+1]).
class RowSplits {
 public:
  /// Validates offsets against the total vertex count. Throws NonMonotonic
  /// or BadBounds.
  static RowSplits validate(std::vector<Index> offsets, Index n_v);

  /// A single split covering [0, n_v).
  static RowSplits single(Index n_v);

  std::span<const Index> offsets() const noexcept { return offsets_; }
  std::size_t num_splits() const noexcept { return offsets_.size() - 1; }
  Index num_vertices() const noexcept { return offsets_.back(); }

  Index begin(std::size_t split) const { return offsets_.at(split); }
  Index end(std::size_t split) const { return offsets_.at(split + 1); }
  Index size(std::size_t split) const { return end(split) - begin(split); }
  Index max_split_size() const noexcept;

  /// Split owning vertex v. Throws OutOfRange.
  std::size_t split_of(Index v) const;

  friend bool operator==(const RowSplits&, const RowSplits&) = default;

 private:
  explicit RowSplits(std::vector<Index> offsets) : offsets_(std::move(offsets)) {}

  std::vector<Index> offsets_;
};

RowSplits validate_row_splits(std::vector<Index> offsets, Index n_v);
std::size_t split_of_vertex(const RowSplits& rs, Index v);

/// Row-major n_v x n_c coordinates plus row splits. Immutable after
/// construction; every other module indexes into this buffer in place.
class PointCloud {
 public:
  PointCloud(std::vector<double> coords, int n_c, RowSplits row_splits);

  Index num_vertices() const noexcept { return n_v_; }
  int num_dims() const noexcept { return n_c_; }
  const RowSplits& row_splits() const noexcept { return row_splits_; }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<const double> point(Index v) const {
    return std::span<const double>(coords_).subspan(static_cast<std::size_t>(v) * n_c_, n_c_);
  }
  double at(Index v, int c) const { return coords_[static_cast<std::size_t>(v) * n_c_ + c]; }

  /// FNV-1a over the coordinate bits and split offsets; used to detect a
  /// bin index applied to the wrong cloud.
  std::uint64_t fingerprint() const noexcept;

 private:
  std::vector<double> coords_;
  Index n_v_ = 0;
  int n_c_ = 0;
  RowSplits row_splits_;
};

/// Per-vertex K neighbor slots. Slot 0 holds the query itself; absent slots
/// are (-1, 0).
struct NeighborMatrix {
  Index n_v = 0;
  int k = 0;
  std::vector<Index> indices;
  std::vector<double> dist2;

  NeighborMatrix() = default;
  NeighborMatrix(Index n_v, int k);

  std::span<Index> index_row(Index v) {
    return std::span<Index>(indices).subspan(static_cast<std::size_t>(v) * k, k);
  }
  std::span<const Index> index_row(Index v) const {
    return std::span<const Index>(indices).subspan(static_cast<std::size_t>(v) * k, k);
  }
  std::span<double> dist_row(Index v) {
    return std::span<double>(dist2).subspan(static_cast<std::size_t>(v) * k, k);
  }
  std::span<const double> dist_row(Index v) const {
    return std::span<const double>(dist2).subspan(static_cast<std::size_t>(v) * k, k);
  }

  std::size_t memory_bytes() const noexcept {
    return indices.size() * sizeof(Index) + dist2.size() * sizeof(double);
  }
};

/// Per-vertex query/candidate roles. With the mask enabled, dir 0 and 2 are
/// not queries, dir 1 and 2 are not candidates, dir 3 is fully active.
struct DirectionMask {
  std::vector<std::uint8_t> dir;
  bool enabled = true;

  DirectionMask() = default;
  explicit DirectionMask(std::vector<std::uint8_t> values, bool enabled = true);

  bool is_query(Index v) const noexcept {
    return !enabled || !(dir[v] == 0 || dir[v] == 2);
  }
  bool is_candidate(Index v) const noexcept {
    return !enabled || !(dir[v] == 1 || dir[v] == 2);
  }
};

}  // namespace fastgraph
