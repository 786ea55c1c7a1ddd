#include "fastgraph/ocgraph.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "fastgraph/parallel.hpp"

namespace fastgraph {

Associations::Associations(std::vector<Index> asso, RowSplits splits)
    : asso_idx(std::move(asso)), rs(std::move(splits)) {
  if (asso_idx.size() != static_cast<std::size_t>(rs.num_vertices())) {
    throw Error(ErrorCode::ShapeMismatch, "association vector length " +
                                              std::to_string(asso_idx.size()) +
                                              " differs from row-split total " +
                                              std::to_string(rs.num_vertices()));
  }
}

UniqueObjects find_unique(const Associations& assoc) {
  UniqueObjects out;
  std::unordered_set<Index> seen;
  for (std::size_t s = 0; s < assoc.rs.num_splits(); ++s) {
    seen.clear();
    for (Index v = assoc.rs.begin(s); v < assoc.rs.end(s); ++v) {
      const Index id = assoc.asso_idx[v];
      if (id < 0 || !seen.insert(id).second) continue;
      out.unique_idx.push_back(id);
      out.unique_rs_asso.push_back(static_cast<Index>(s));
    }
  }
  return out;
}

SameCounts max_same_count(const Associations& assoc, const UniqueObjects& uniq) {
  SameCounts out;
  out.counts.assign(uniq.size(), 0);
  // Object slots grouped by split, keyed by id.
  std::vector<std::unordered_map<Index, std::size_t>> slot_of(assoc.rs.num_splits());
  for (std::size_t k = 0; k < uniq.size(); ++k) {
    slot_of.at(static_cast<std::size_t>(uniq.unique_rs_asso[k]))[uniq.unique_idx[k]] = k;
  }
  for (std::size_t s = 0; s < assoc.rs.num_splits(); ++s) {
    if (slot_of[s].empty()) continue;
    for (Index v = assoc.rs.begin(s); v < assoc.rs.end(s); ++v) {
      auto it = slot_of[s].find(assoc.asso_idx[v]);
      if (it != slot_of[s].end()) ++out.counts[it->second];
    }
  }
  for (Index c : out.counts) out.n_maxuq = std::max(out.n_maxuq, c);
  return out;
}

AssociationMatrices oc_helper(const Associations& assoc, const UniqueObjects& uniq, Index n_maxuq,
                              Index n_maxrs, bool calc_m_not, std::atomic<std::uint64_t>* visits) {
  if (n_maxuq < 1 || n_maxrs < 1) {
    throw Error(ErrorCode::BadCapacity, "n_maxuq and n_maxrs must be >= 1");
  }
  if (uniq.unique_idx.size() != uniq.unique_rs_asso.size()) {
    throw Error(ErrorCode::ShapeMismatch, "unique ids and split assignments differ in length");
  }
  const Index n_unique = static_cast<Index>(uniq.size());
  const Index n_vert = assoc.rs.num_vertices();

  AssociationMatrices out;
  out.n_unique = n_unique;
  out.n_maxuq = n_maxuq;
  out.n_maxrs = n_maxrs;
  out.m.assign(static_cast<std::size_t>(n_unique) * n_maxuq, kNoIndex);
  if (calc_m_not) out.m_not.emplace(static_cast<std::size_t>(n_unique) * n_maxrs, kNoIndex);

  parallel_for(static_cast<std::size_t>(n_unique), [&](std::size_t k_begin, std::size_t k_end) {
    std::uint64_t local_visits = 0;
    for (std::size_t k = k_begin; k < k_end; ++k) {
      const Index uq = uniq.unique_idx[k];
      const std::size_t split = static_cast<std::size_t>(uniq.unique_rs_asso[k]);
      if (split >= assoc.rs.num_splits()) {
        throw Error(ErrorCode::OutOfRange, "object split index out of range");
      }
      const Index start = assoc.rs.begin(split);
      Index end = std::min(assoc.rs.end(split), n_vert);
      if (end - start > n_maxrs) end = start + n_maxrs;

      Index* m_row = out.m.data() + k * n_maxuq;
      Index* not_row = calc_m_not ? out.m_not->data() + k * n_maxrs : nullptr;
      Index fill = 0;
      Index fill_not = 0;
      // One pass fills both rows; stop once every requested row is full.
      for (Index i = start; i < end; ++i) {
        if (fill == n_maxuq && (!calc_m_not || fill_not == n_maxrs)) break;
        ++local_visits;
        if (assoc.asso_idx[i] == uq) {
          if (fill < n_maxuq) m_row[fill++] = i;
        } else if (calc_m_not && fill_not < n_maxrs) {
          not_row[fill_not++] = i;
        }
      }
    }
    if (visits != nullptr) visits->fetch_add(local_visits, std::memory_order_relaxed);
  }, 8);
  return out;
}

}  // namespace fastgraph
