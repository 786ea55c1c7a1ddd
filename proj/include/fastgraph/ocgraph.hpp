#pragma once

// Index structures for object condensation: per-object member lists (M) and
// within-split non-member lists (M_not) under ragged batching.

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fastgraph/core.hpp"

namespace fastgraph {

struct Associations {
  std::vector<Index> asso_idx;  // object id per vertex, negative = unassociated
  RowSplits rs;

  /// Throws ShapeMismatch when lengths disagree.
  Associations(std::vector<Index> asso, RowSplits splits);
};

/// An object is the pair (id, split); the same id in two splits is two objects.
struct UniqueObjects {
  std::vector<Index> unique_idx;
  std::vector<Index> unique_rs_asso;

  std::size_t size() const noexcept { return unique_idx.size(); }
};

struct AssociationMatrices {
  Index n_unique = 0;
  Index n_maxuq = 0;
  Index n_maxrs = 0;
  std::vector<Index> m;                     // n_unique x n_maxuq
  std::optional<std::vector<Index>> m_not;  // n_unique x n_maxrs

  std::span<const Index> m_row(Index k) const {
    return std::span<const Index>(m).subspan(static_cast<std::size_t>(k) * n_maxuq, n_maxuq);
  }
  std::span<const Index> m_not_row(Index k) const {
    return std::span<const Index>(*m_not).subspan(static_cast<std::size_t>(k) * n_maxrs, n_maxrs);
  }
};

/// Distinct non-negative ids per split, in first-occurrence order.
UniqueObjects find_unique(const Associations& assoc);

struct SameCounts {
  Index n_maxuq = 0;
  std::vector<Index> counts;  // per object, aligned with UniqueObjects
};

SameCounts max_same_count(const Associations& assoc, const UniqueObjects& uniq);

/// Builds M (and optionally M_not) with rows in ascending vertex order,
/// truncated to capacity and -1 padded. The scan window of each split is
/// capped at n_maxrs vertices from the split start. If `visits` is given,
/// the number of association entries read is added to it.
AssociationMatrices oc_helper(const Associations& assoc, const UniqueObjects& uniq, Index n_maxuq,
                              Index n_maxrs, bool calc_m_not,
                              std::atomic<std::uint64_t>* visits = nullptr);

}  // namespace fastgraph
