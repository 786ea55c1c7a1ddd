#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "fastgraph/stepper.hpp"

using namespace fastgraph;

namespace {

std::vector<Index> drain(BinStepper& s) {
  std::vector<Index> out;
  while (auto c = s.step()) out.push_back(*c);
  return out;
}

std::vector<Index> ring(const std::vector<int>& counts, const std::vector<int>& center, int d) {
  BinStepper s(counts, center);
  s.set_radius(d);
  return drain(s);
}

// Every grid cell in flat order, kept when its Chebyshev distance is d.
std::vector<Index> brute_ring(const std::vector<int>& counts, const std::vector<int>& center,
                              int d) {
  Index total = 1;
  for (int c : counts) total *= c;
  std::vector<Index> out;
  std::vector<int> cell(counts.size());
  for (Index f = 0; f < total; ++f) {
    unflatten_cell(f, counts, cell);
    int cheb = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) cheb = std::max(cheb, std::abs(cell[i] - center[i]));
    if (cheb == d) out.push_back(f);
  }
  return out;
}

// Direct walk over every position of the (2d+1)^N cube, rejecting interior
// positions and cells outside the grid.
std::vector<Index> cube_walk_ring(const std::vector<int>& counts, const std::vector<int>& center,
                                  int d) {
  const int n = static_cast<int>(counts.size());
  const std::int64_t side = 2 * d + 1;
  std::int64_t cap = 1;
  for (int i = 0; i < n; ++i) cap *= side;
  std::vector<Index> out;
  std::vector<int> cell(n);
  for (std::int64_t pos = 0; pos < cap; ++pos) {
    std::int64_t rem = pos;
    bool surface = false, inside = true;
    for (int i = n - 1; i >= 0; --i) {
      const int off = static_cast<int>(rem % side) - d;
      rem /= side;
      surface = surface || std::abs(off) == d;
      cell[i] = center[i] + off;
      inside = inside && cell[i] >= 0 && cell[i] < counts[i];
    }
    if (!surface || !inside) continue;
    out.push_back(flatten_cell(cell, counts));
  }
  return out;
}

}  // namespace

TEST(BinStepper, RadiusOneInterior) {
  EXPECT_EQ(ring({5, 5}, {2, 2}, 1), (std::vector<Index>{6, 7, 8, 11, 13, 16, 17, 18}));
}

TEST(BinStepper, RadiusOneCorner) {
  EXPECT_EQ(ring({5, 5}, {0, 0}, 1), (std::vector<Index>{1, 5, 6}));
}

TEST(BinStepper, RadiusZeroIsCentre) {
  EXPECT_EQ(ring({5, 5}, {2, 2}, 0), (std::vector<Index>{12}));
}

TEST(BinStepper, RingBeyondGridIsEmpty) {
  EXPECT_TRUE(ring({5, 5}, {2, 2}, 3).empty());
  EXPECT_TRUE(ring({3, 3, 3}, {0, 0, 0}, 7).empty());
}

TEST(BinStepper, StaysExhausted) {
  BinStepper s(std::vector<int>{5, 5}, std::vector<int>{2, 2});
  s.set_radius(1);
  drain(s);
  EXPECT_FALSE(s.step().has_value());
  EXPECT_FALSE(s.step().has_value());
  s.set_radius(0);
  EXPECT_EQ(drain(s), (std::vector<Index>{12}));
}

TEST(BinStepper, Accessors) {
  BinStepper s(std::vector<int>{6, 6, 6}, std::vector<int>{1, 2, 3});
  s.set_radius(2);
  EXPECT_EQ(s.radius(), 2);
  EXPECT_EQ(s.side_len(), 5);
  EXPECT_EQ(s.cube_cap(), 125);
  EXPECT_EQ(s.rank(), 3);
}

TEST(BinStepper, RejectsBadInput) {
  EXPECT_THROW(BinStepper(std::vector<int>{5}, std::vector<int>{0}), Error);
  EXPECT_THROW(BinStepper(std::vector<int>(6, 5), std::vector<int>(6, 0)), Error);
  EXPECT_THROW(BinStepper(std::vector<int>{5, 5}, std::vector<int>{5, 0}), Error);
  EXPECT_THROW(BinStepper(std::vector<int>{5, 5}, std::vector<int>{0}), Error);
}

// Every centre of small grids of rank 2 and 3, all radii: ring output equals
// the brute-force Chebyshev shell in the same order, the cube walk agrees,
// and the union over radii is each grid cell exactly once.
TEST(BinStepper, ExhaustiveSmallGrids) {
  const std::vector<std::vector<int>> grids = {{5, 5}, {6, 5}, {5, 7}, {5, 5, 5}, {6, 5, 7}};
  for (const auto& counts : grids) {
    Index total = 1;
    int max_side = 0;
    for (int c : counts) {
      total *= c;
      max_side = std::max(max_side, c);
    }
    std::vector<int> center(counts.size());
    for (Index f = 0; f < total; ++f) {
      unflatten_cell(f, counts, center);
      std::vector<int> seen(total, 0);
      for (int d = 0; d <= max_side; ++d) {
        const auto got = ring(counts, center, d);
        ASSERT_EQ(got, brute_ring(counts, center, d));
        ASSERT_EQ(got, cube_walk_ring(counts, center, d));
        for (Index c : got) ++seen[c];
      }
      for (Index c = 0; c < total; ++c) ASSERT_EQ(seen[c], 1) << "cell " << c;
    }
  }
}

// Unclipped ring sizes are (2d+1)^N - (2d-1)^N.
TEST(BinStepper, UnclippedRingCellCount) {
  for (int n = 2; n <= 5; ++n) {
    const std::vector<int> counts(n, 9);
    const std::vector<int> center(n, 4);
    for (int d = 0; d <= 4; ++d) {
      std::int64_t outer = 1, inner = 1;
      for (int i = 0; i < n; ++i) {
        outer *= 2 * d + 1;
        inner *= std::max(0, 2 * d - 1);
      }
      EXPECT_EQ(static_cast<std::int64_t>(ring(counts, center, d).size()), outer - inner)
          << "n=" << n << " d=" << d;
    }
  }
}

TEST(BinStepper, RankFiveCornersAndEdges) {
  const std::vector<int> counts = {5, 6, 5, 5, 7};
  const std::vector<std::vector<int>> centers = {
      {0, 0, 0, 0, 0}, {4, 5, 4, 4, 6}, {2, 3, 2, 2, 3}, {0, 5, 2, 4, 1}};
  for (const auto& c : centers) {
    for (int d = 0; d <= 7; ++d) ASSERT_EQ(ring(counts, c, d), brute_ring(counts, c, d));
  }
}
