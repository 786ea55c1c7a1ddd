#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "fastgraph/simd/kernels.hpp"

using namespace fastgraph::simd;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> out(n);
  for (double& x : out) x = u(rng);
  return out;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(Kernels, ScalarSqDistRange) {
  const std::vector<double> coords{0, 0, 3, 4, 1, 1};
  const double q[2] = {0, 0};
  std::vector<double> out(3);
  scalar_kernels().sq_dist_range(coords.data(), 2, q, 0, 3, out.data());
  EXPECT_EQ(out, (std::vector<double>{0, 25, 2}));
}

TEST(Kernels, ScalarSqDistGather) {
  const std::vector<double> coords{0, 1, 4};
  const double q[1] = {1};
  const std::int32_t ids[3] = {2, 0, 1};
  std::vector<double> out(3);
  scalar_kernels().sq_dist_gather(coords.data(), 1, q, ids, 3, out.data());
  EXPECT_EQ(out, (std::vector<double>{9, 1, 0}));
}

TEST(Kernels, ScalarScaledOps) {
  std::vector<double> acc{1, 1, 1};
  const std::vector<double> x{1, -2, 3};
  scalar_kernels().scaled_add(0.5, x.data(), acc.data(), 3);
  EXPECT_EQ(acc, (std::vector<double>{1.5, 0, 2.5}));
  scalar_kernels().scaled_max(2.0, x.data(), acc.data(), 3);
  EXPECT_EQ(acc, (std::vector<double>{2, 0, 6}));
}

TEST(Kernels, BackendNames) {
  Backend b{};
  EXPECT_TRUE(parse_backend("scalar", b));
  EXPECT_EQ(b, Backend::Scalar);
  EXPECT_TRUE(parse_backend("avx2", b));
  EXPECT_EQ(b, Backend::Avx2);
  EXPECT_FALSE(parse_backend("sse9", b));
  EXPECT_EQ(backend_name(Backend::Scalar), "scalar");
  EXPECT_TRUE(backend_supported(Backend::Scalar));
}

TEST(Kernels, SetBackendRoundTrip) {
  const Backend before = active_backend();
  set_backend(Backend::Scalar);
  EXPECT_EQ(kernels().backend, Backend::Scalar);
  set_backend(before);
  EXPECT_EQ(active_backend(), before);
}

TEST(Kernels, UnsupportedBackendThrows) {
  if (backend_supported(Backend::Avx2)) GTEST_SKIP() << "AVX2 available";
  EXPECT_THROW(kernels_for(Backend::Avx2), std::invalid_argument);
}

class Avx2Equivalence : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    if (!backend_supported(Backend::Avx2)) GTEST_SKIP() << "AVX2 not available";
  }
};

TEST_P(Avx2Equivalence, SqDistGatherAndRange) {
  const int n_c = GetParam();
  const KernelTable& ref = scalar_kernels();
  const KernelTable& vec = kernels_for(Backend::Avx2);
  std::mt19937_64 rng(1000 + n_c);
  const std::size_t n_pts = 5000;
  const auto coords = random_vec(n_pts * n_c, rng, 100.0);
  for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 63u, 64u, 1001u}) {
    const auto query = random_vec(n_c, rng, 100.0);
    std::vector<std::int32_t> ids(count);
    std::uniform_int_distribution<std::int32_t> pick(0, static_cast<std::int32_t>(n_pts) - 1);
    for (auto& id : ids) id = pick(rng);
    if (count > 0) ids.back() = static_cast<std::int32_t>(n_pts) - 1;

    std::vector<double> a(count), b(count);
    ref.sq_dist_gather(coords.data(), n_c, query.data(), ids.data(), count, a.data());
    vec.sq_dist_gather(coords.data(), n_c, query.data(), ids.data(), count, b.data());
    EXPECT_TRUE(bit_equal(a, b)) << "gather n_c=" << n_c << " count=" << count;

    const auto first = static_cast<std::int32_t>(n_pts - count);
    ref.sq_dist_range(coords.data(), n_c, query.data(), first, count, a.data());
    vec.sq_dist_range(coords.data(), n_c, query.data(), first, count, b.data());
    EXPECT_TRUE(bit_equal(a, b)) << "range n_c=" << n_c << " count=" << count;
  }
}

TEST_P(Avx2Equivalence, ScaledAddAndMax) {
  const KernelTable& ref = scalar_kernels();
  const KernelTable& vec = kernels_for(Backend::Avx2);
  std::mt19937_64 rng(77 + GetParam());
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 11u, 16u, 37u}) {
    const auto x = random_vec(n, rng);
    const auto init = random_vec(n, rng);
    const double w = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
    auto a = init, b = init;
    ref.scaled_add(w, x.data(), a.data(), n);
    vec.scaled_add(w, x.data(), b.data(), n);
    EXPECT_TRUE(bit_equal(a, b)) << "add n=" << n;
    a = init;
    b = init;
    ref.scaled_max(w, x.data(), a.data(), n);
    vec.scaled_max(w, x.data(), b.data(), n);
    EXPECT_TRUE(bit_equal(a, b)) << "max n=" << n;
  }
}

TEST_P(Avx2Equivalence, ScaledMaxSignedZeroTies) {
  const KernelTable& ref = scalar_kernels();
  const KernelTable& vec = kernels_for(Backend::Avx2);
  const std::vector<double> x{0.0, -0.0, 1.0, -1.0, 0.0};
  const std::vector<double> init{-0.0, 0.0, 1.0, -1.0, 0.0};
  auto a = init, b = init;
  ref.scaled_max(1.0, x.data(), a.data(), x.size());
  vec.scaled_max(1.0, x.data(), b.data(), x.size());
  EXPECT_TRUE(bit_equal(a, b));
}

INSTANTIATE_TEST_SUITE_P(Dims, Avx2Equivalence, ::testing::Range(1, 11));
