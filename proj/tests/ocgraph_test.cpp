#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fastgraph/harness/dataset.hpp"
#include "fastgraph/ocgraph.hpp"

using namespace fastgraph;

namespace {

Associations assoc_of(std::vector<Index> asso, std::vector<Index> offsets) {
  const Index n = static_cast<Index>(asso.size());
  return Associations(std::move(asso), RowSplits::validate(std::move(offsets), n));
}

// Direct filter over the capped window of the object's split.
void expect_matches_filter(const Associations& a, const UniqueObjects& u,
                           const AssociationMatrices& m, Index n_maxuq, Index n_maxrs) {
  for (Index k = 0; k < m.n_unique; ++k) {
    const std::size_t s = static_cast<std::size_t>(u.unique_rs_asso[k]);
    const Index start = a.rs.begin(s);
    const Index end = std::min(a.rs.end(s), start + n_maxrs);
    std::vector<Index> in, out;
    for (Index i = start; i < end; ++i) {
      (a.asso_idx[i] == u.unique_idx[k] ? in : out).push_back(i);
    }
    in.resize(n_maxuq, kNoIndex);
    out.resize(n_maxrs, kNoIndex);
    const auto row = m.m_row(k);
    ASSERT_EQ(std::vector<Index>(row.begin(), row.end()), in) << "object " << k;
    if (m.m_not) {
      const auto row_not = m.m_not_row(k);
      ASSERT_EQ(std::vector<Index>(row_not.begin(), row_not.end()), out) << "object " << k;
    }
  }
}

}  // namespace

TEST(OcGraph, Example) {
  const Associations a = assoc_of({7, 7, 3, 7, 3}, {0, 5});
  const UniqueObjects u = find_unique(a);
  EXPECT_EQ(u.unique_idx, (std::vector<Index>{7, 3}));
  EXPECT_EQ(u.unique_rs_asso, (std::vector<Index>{0, 0}));
  const SameCounts sc = max_same_count(a, u);
  EXPECT_EQ(sc.n_maxuq, 3);
  EXPECT_EQ(sc.counts, (std::vector<Index>{3, 2}));
  const AssociationMatrices m = oc_helper(a, u, 4, 5, true);
  EXPECT_EQ(m.m, (std::vector<Index>{0, 1, 3, -1, 2, 4, -1, -1}));
  ASSERT_TRUE(m.m_not.has_value());
  EXPECT_EQ(*m.m_not, (std::vector<Index>{2, 4, -1, -1, -1, 0, 1, 3, -1, -1}));
}

TEST(OcGraph, NoMNotWhenNotRequested) {
  const Associations a = assoc_of({7, 7, 3, 7, 3}, {0, 5});
  const AssociationMatrices m = oc_helper(a, find_unique(a), 4, 5, false);
  EXPECT_FALSE(m.m_not.has_value());
  EXPECT_EQ(m.m, (std::vector<Index>{0, 1, 3, -1, 2, 4, -1, -1}));
}

TEST(OcGraph, SameIdInTwoSplitsIsTwoObjects) {
  const Associations a = assoc_of({1, -1, 1, 1, 2, 1}, {0, 3, 6});
  const UniqueObjects u = find_unique(a);
  EXPECT_EQ(u.unique_idx, (std::vector<Index>{1, 1, 2}));
  EXPECT_EQ(u.unique_rs_asso, (std::vector<Index>{0, 1, 1}));
  const AssociationMatrices m = oc_helper(a, u, 2, 3, true);
  EXPECT_EQ(m.m, (std::vector<Index>{0, 2, 3, 5, 4, -1}));
  EXPECT_EQ(*m.m_not, (std::vector<Index>{1, -1, -1, 4, -1, -1, 3, 5, -1}));
}

TEST(OcGraph, NoiseOnlySplit) {
  const Associations a = assoc_of({-1, -1, 0}, {0, 2, 3});
  const UniqueObjects u = find_unique(a);
  EXPECT_EQ(u.size(), 1u);
  EXPECT_EQ(u.unique_rs_asso[0], 1);
}

TEST(OcGraph, TruncatesToCapacity) {
  const Associations a = assoc_of({5, 5, 5, 5, 6, 6}, {0, 6});
  const UniqueObjects u = find_unique(a);
  const AssociationMatrices m = oc_helper(a, u, 2, 3, true);
  // The scan window is the first three vertices, so object 6 sees none of
  // its members.
  EXPECT_EQ(m.m, (std::vector<Index>{0, 1, -1, -1}));
  EXPECT_EQ(*m.m_not, (std::vector<Index>{-1, -1, -1, 0, 1, 2}));
}

TEST(OcGraph, Errors) {
  EXPECT_THROW(assoc_of({1, 2}, {0, 3}), Error);
  try {
    Associations({1, 2, 3}, RowSplits::single(2));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
  const Associations a = assoc_of({1, 2}, {0, 2});
  try {
    oc_helper(a, find_unique(a), 0, 2, true);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadCapacity);
  }
  EXPECT_THROW(oc_helper(a, find_unique(a), 2, 0, true), Error);
}

TEST(OcGraph, RandomInstancesMatchFilter) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 50 + static_cast<Index>(rng() % 3000);
    const int splits = 1 + trial % 4;
    const RowSplits rs = harness::even_row_splits(n, splits);
    const int objects = 1 + static_cast<int>(rng() % 50);
    const Associations a = harness::generate_associations(rs, objects, 0.2, rng());
    const UniqueObjects u = find_unique(a);
    const SameCounts sc = max_same_count(a, u);
    const Index maxrs = rs.max_split_size();
    const Index caps[][2] = {{sc.n_maxuq, maxrs}, {std::max<Index>(1, sc.n_maxuq / 2), maxrs},
                             {sc.n_maxuq + 3, std::max<Index>(1, maxrs / 3)}};
    for (const auto& cap : caps) {
      for (bool with_not : {true, false}) {
        const AssociationMatrices m = oc_helper(a, u, cap[0], cap[1], with_not);
        expect_matches_filter(a, u, m, cap[0], cap[1]);
      }
    }
  }
}

TEST(OcGraph, MembersPartitionAssociatedVertices) {
  const RowSplits rs = harness::even_row_splits(4000, 4);
  const Associations a = harness::generate_associations(rs, 30, 0.1, 99);
  const UniqueObjects u = find_unique(a);
  const SameCounts sc = max_same_count(a, u);
  const AssociationMatrices m = oc_helper(a, u, sc.n_maxuq, rs.max_split_size(), true);
  std::vector<int> hits(4000, 0);
  for (Index k = 0; k < m.n_unique; ++k) {
    for (Index i : m.m_row(k)) {
      if (i >= 0) ++hits[i];
    }
  }
  for (Index v = 0; v < 4000; ++v) EXPECT_EQ(hits[v], a.asso_idx[v] >= 0 ? 1 : 0);
  for (Index k = 0; k < m.n_unique; ++k) {
    Index members = 0, others = 0;
    for (Index i : m.m_row(k)) members += i >= 0;
    for (Index i : m.m_not_row(k)) others += i >= 0;
    EXPECT_EQ(members, sc.counts[k]);
    EXPECT_EQ(members + others, rs.size(u.unique_rs_asso[k]));
  }
}

// Each object reads each vertex of its split at most once.
TEST(OcGraph, VisitCountIsLinear) {
  const RowSplits rs = harness::even_row_splits(10000, 4);
  const Associations a = harness::generate_associations(rs, 50, 0.1, 5);
  const UniqueObjects u = find_unique(a);
  const SameCounts sc = max_same_count(a, u);
  std::uint64_t bound = 0;
  for (std::size_t k = 0; k < u.size(); ++k) bound += rs.size(u.unique_rs_asso[k]);
  for (bool with_not : {true, false}) {
    std::atomic<std::uint64_t> visits{0};
    oc_helper(a, u, sc.n_maxuq, rs.max_split_size(), with_not, &visits);
    EXPECT_GT(visits.load(), 0u);
    EXPECT_LE(visits.load(), bound);
    if (with_not) {
      EXPECT_EQ(visits.load(), bound);
    }
  }
}
