#pragma once

// Oracle comparison utilities and the binned-vs-brute verification sweep.

#include <cstdint>
#include <string>
#include <vector>

#include "fastgraph/core.hpp"
#include "fastgraph/harness/dataset.hpp"

namespace fastgraph::harness {

/// Sorts slots 1..K-1 of every row by (dist2, index); padding moves last.
void sort_neighbor_rows(NeighborMatrix& nm);

/// Hash of the per-row sorted squared distances (padding excluded). Equal
/// for two exact results of the same instance regardless of tie-breaking.
std::uint64_t distance_checksum(const NeighborMatrix& nm);

/// True when every pair of vertices within each split has a distinct
/// squared distance (exhaustive; intended for n up to a few thousand).
bool has_distinct_pair_distances(const PointCloud& cloud);

struct OracleComparison {
  bool distances_match = true;
  bool indices_match = true;
  double max_rel_error = 0.0;
  Index first_bad_vertex = kNoIndex;
  std::string message;

  bool ok(bool require_index_sets) const {
    return distances_match && (!require_index_sets || indices_match);
  }
};

/// Per vertex: sorted dist2 lists agree within `rel_tol` and padding counts
/// agree. Index sets are compared on all slots strictly closer than the
/// row's largest distance (ties at the boundary may legitimately differ);
/// with `full_index_sets` every slot must agree.
OracleComparison compare_to_oracle(const NeighborMatrix& candidate, const NeighborMatrix& oracle,
                                   double rel_tol, bool full_index_sets);

/// Row-split isolation: every valid index lies in its query's split.
bool respects_row_splits(const NeighborMatrix& nm, const RowSplits& rs);

struct VerifyPlan {
  std::vector<int> dims{2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<Index> sizes{100, 1000, 10000};
  std::vector<int> ks{1, 10, 40};
  std::vector<int> splits{1, 4};
  std::uint64_t seed = 1;
  Distribution distribution = Distribution::Uniform;
  double rel_tol = 1e-5;
};

struct VerifyCase {
  Index n = 0;
  int d = 0;
  int k = 0;
  int splits = 0;
  bool passed = false;
  std::uint64_t checksum_binned = 0;
  std::uint64_t checksum_brute = 0;
  std::string detail;
};

/// Seed for one sweep cell, derived from the plan seed and the cell shape.
std::uint64_t case_seed(std::uint64_t seed, Index n, int d, int k, int splits);

std::vector<VerifyCase> run_verify(const VerifyPlan& plan);

/// One CSV line per case; contains no timings so reruns are byte-identical.
std::string format_verify_report(const std::vector<VerifyCase>& cases);

}  // namespace fastgraph::harness
