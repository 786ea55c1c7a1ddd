#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fastgraph/binning.hpp"
#include "fastgraph/knn.hpp"
#include "fastgraph/parallel.hpp"
#include "test_util.hpp"

using namespace fastgraph;
using namespace fastgraph::test;

namespace {

// sum(upstream * dist2) for a fixed neighbor selection.
double weighted_distance_sum(const PointCloud& cloud, const NeighborMatrix& nm,
                             const std::vector<double>& upstream) {
  double total = 0;
  for (Index v = 0; v < nm.n_v; ++v) {
    for (int s = 0; s < nm.k; ++s) {
      const Index n = nm.index_row(v)[s];
      if (n < 0) continue;
      double d2 = 0;
      for (int c = 0; c < cloud.num_dims(); ++c) {
        const double diff = cloud.at(v, c) - cloud.at(n, c);
        d2 += diff * diff;
      }
      total += upstream[static_cast<std::size_t>(v) * nm.k + s] * d2;
    }
  }
  return total;
}

PointCloud perturbed(const PointCloud& cloud, Index v, int c, double delta) {
  std::vector<double> coords(cloud.coords().begin(), cloud.coords().end());
  coords[static_cast<std::size_t>(v) * cloud.num_dims() + c] += delta;
  return PointCloud(std::move(coords), cloud.num_dims(), cloud.row_splits());
}

std::vector<double> random_upstream(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> out(n);
  for (double& x : out) x = u(rng);
  return out;
}

}  // namespace

TEST(KnnBackward, TwoPointExample) {
  const PointCloud cloud = make_cloud({0, 0, 3, 0}, 2);
  NeighborMatrix nm(2, 2);
  nm.indices = {0, 1, 1, kNoIndex};
  nm.dist2 = {0, 9, 0, 0};
  const DistanceGradient g = knn_backward(cloud, nm, std::vector<double>{0, 1, 0, 0});
  EXPECT_DOUBLE_EQ(g.at(0, 0), -6.0);
  EXPECT_DOUBLE_EQ(g.at(1, 0), 6.0);
  EXPECT_DOUBLE_EQ(g.at(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(g.at(1, 1), 0.0);
}

TEST(KnnBackward, ZeroUpstreamGivesZero) {
  const PointCloud cloud = random_cloud(200, 3, {0, 200}, 1);
  const BinIndex idx = build_bin_index(cloud, BinningConfig::for_cloud(cloud, 8));
  const NeighborMatrix nm = binned_select_knn(cloud, idx, {.k = 8});
  const DistanceGradient g = knn_backward(cloud, nm, std::vector<double>(200 * 8, 0.0));
  for (double x : g.grad_coords) EXPECT_EQ(x, 0.0);
}

TEST(KnnBackward, SelfSlotAndPaddingContributeNothing) {
  const PointCloud cloud = make_cloud({0, 0, 1, 2, 4, 4}, 2, {0, 2, 3});
  const BinIndex idx = build_bin_index(cloud, BinningConfig::for_cloud(cloud, 3));
  const NeighborMatrix nm = binned_select_knn(cloud, idx, {.k = 3});
  std::vector<double> up(9, 0.0);
  for (Index v = 0; v < 3; ++v) {
    up[v * 3] = 5.0;
    for (int s = 1; s < 3; ++s) {
      if (nm.index_row(v)[s] < 0) up[v * 3 + s] = 7.0;
    }
  }
  const DistanceGradient g = knn_backward(cloud, nm, up);
  for (double x : g.grad_coords) EXPECT_EQ(x, 0.0);
}

TEST(KnnBackward, KOneGivesZero) {
  const PointCloud cloud = random_cloud(30, 4, {0, 30}, 2);
  const NeighborMatrix nm = brute_force_knn(cloud, {.k = 1});
  const DistanceGradient g = knn_backward(cloud, nm, std::vector<double>(30, 1.0));
  for (double x : g.grad_coords) EXPECT_EQ(x, 0.0);
}

// Central differences on the weighted distance sum with the selection fixed.
TEST(KnnBackward, MatchesFiniteDifferences) {
  const double h = 1e-4;
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 2 + trial % 9;
    const int k = 2 + trial % 6;
    const Index n = 60;
    const PointCloud cloud = random_cloud(n, d, {0, 25, 60}, 100 + trial);
    const BinIndex idx = build_bin_index(cloud, BinningConfig::for_cloud(cloud, k));
    const NeighborMatrix nm = binned_select_knn(cloud, idx, {.k = k});
    const auto up = random_upstream(static_cast<std::size_t>(n) * k, 200 + trial);
    const DistanceGradient g = knn_backward(cloud, nm, up);
    for (Index v = 0; v < n; v += 7) {
      for (int c = 0; c < d; ++c) {
        const double fd = (weighted_distance_sum(perturbed(cloud, v, c, h), nm, up) -
                           weighted_distance_sum(perturbed(cloud, v, c, -h), nm, up)) /
                          (2 * h);
        EXPECT_NEAR(g.at(v, c), fd, 1e-4 * std::max(1.0, std::abs(fd)))
            << "trial " << trial << " v=" << v << " c=" << c;
      }
    }
  }
}

TEST(KnnBackward, KnnWithGradMatchesSeparateCalls) {
  const PointCloud cloud = random_cloud(500, 5, {0, 100, 500}, 7);
  const BinIndex idx = build_bin_index(cloud, BinningConfig::for_cloud(cloud, 10));
  const KnnWithGrad fused = knn_with_grad(cloud, idx, {.k = 10});
  const NeighborMatrix nm = binned_select_knn(cloud, idx, {.k = 10});
  EXPECT_EQ(fused.result.indices, nm.indices);
  EXPECT_EQ(fused.result.dist2, nm.dist2);
  const auto up = random_upstream(5000, 8);
  EXPECT_EQ(fused.backward(up).grad_coords, knn_backward(cloud, nm, up).grad_coords);
}

TEST(KnnBackward, IndependentOfThreadCount) {
  const PointCloud cloud = random_cloud(3000, 3, {0, 3000}, 9);
  const NeighborMatrix nm = brute_force_knn(cloud, {.k = 12});
  const auto up = random_upstream(3000 * 12, 10);
  const int before = num_threads();
  set_num_threads(1);
  const auto a = knn_backward(cloud, nm, up).grad_coords;
  set_num_threads(5);
  const auto b = knn_backward(cloud, nm, up).grad_coords;
  set_num_threads(before);
  EXPECT_EQ(a, b);
}

TEST(KnnBackward, ShapeErrors) {
  const PointCloud cloud = random_cloud(10, 2, {0, 10}, 3);
  const NeighborMatrix nm = brute_force_knn(cloud, {.k = 3});
  try {
    knn_backward(cloud, nm, std::vector<double>(29, 0.0));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
  const PointCloud bigger = random_cloud(11, 2, {0, 11}, 3);
  EXPECT_THROW(knn_backward(bigger, nm, std::vector<double>(30, 0.0)), Error);
  NeighborMatrix bad = nm;
  bad.indices[4] = 10;
  EXPECT_THROW(knn_backward(cloud, bad, std::vector<double>(30, 0.0)), Error);
}
