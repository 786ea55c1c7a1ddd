#include "fastgraph/harness/dataset.hpp"

#include <random>
#include <string>
#include <vector>

namespace fastgraph::harness {

bool parse_distribution(std::string_view text, Distribution& out) noexcept {
  if (text == "uniform") {
    out = Distribution::Uniform;
    return true;
  }
  if (text == "clusters") {
    out = Distribution::Clusters;
    return true;
  }
  return false;
}

std::string_view distribution_name(Distribution d) noexcept {
  return d == Distribution::Uniform ? "uniform" : "clusters";
}

RowSplits even_row_splits(Index n, int splits) {
  std::vector<Index> offsets(static_cast<std::size_t>(splits) + 1);
  for (int i = 0; i <= splits; ++i) {
    offsets[i] = static_cast<Index>(static_cast<std::int64_t>(i) * n / splits);
  }
  return RowSplits::validate(std::move(offsets), n);
}

PointCloud generate_dataset(Index n, int d, int splits, std::uint64_t seed,
                            Distribution distribution) {
  if (splits < 1 || n < splits || d < 1) {
    throw Error(ErrorCode::BadShape, "need n >= splits >= 1 and d >= 1 (n=" + std::to_string(n) +
                                         ", d=" + std::to_string(d) +
                                         ", splits=" + std::to_string(splits) + ")");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  RowSplits rs = even_row_splits(n, splits);

  if (distribution == Distribution::Uniform) {
    for (double& x : coords) x = unit(rng);
  } else {
    constexpr int kCentres = 16;
    std::normal_distribution<double> noise(0.0, 0.03);
    std::uniform_int_distribution<int> pick(0, kCentres - 1);
    std::vector<double> centres(static_cast<std::size_t>(kCentres) * d);
    for (int s = 0; s < splits; ++s) {
      for (double& c : centres) c = unit(rng);
      for (Index v = rs.begin(s); v < rs.end(s); ++v) {
        const double* c = centres.data() + static_cast<std::size_t>(pick(rng)) * d;
        for (int i = 0; i < d; ++i) coords[static_cast<std::size_t>(v) * d + i] = c[i] + noise(rng);
      }
    }
  }
  return PointCloud(std::move(coords), d, std::move(rs));
}

Associations generate_associations(const RowSplits& rs, int n_objects, double noise_fraction,
                                   std::uint64_t seed) {
  if (n_objects < 1) throw Error(ErrorCode::BadShape, "need at least one object");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> object(0, n_objects - 1);
  std::bernoulli_distribution noise(noise_fraction);
  std::vector<Index> asso(static_cast<std::size_t>(rs.num_vertices()));
  for (Index& a : asso) a = noise(rng) ? kNoIndex : object(rng);
  return Associations(std::move(asso), rs);
}

}  // namespace fastgraph::harness
