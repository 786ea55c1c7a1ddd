#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fastgraph/binning.hpp"
#include "fastgraph/core.hpp"
#include "fastgraph/harness/dataset.hpp"
#include "fastgraph/harness/results.hpp"

namespace fastgraph::harness {

enum class Method { Binned, Brute };

std::string_view method_name(Method m) noexcept;
bool parse_method(std::string_view text, Method& out) noexcept;

struct KnnRun {
  NeighborMatrix result;
  double seconds = 0.0;
  /// Peak heap growth during the run beyond the returned result.
  std::size_t aux_bytes = 0;
  /// Bytes of the bin-index arrays (binned method only).
  std::size_t index_bytes = 0;
};

/// Times and measures one kNN call. For Binned the index build is included.
/// `binning` overrides the default config (d_bin = min(n_c, 5)).
KnnRun run_knn_method(const PointCloud& cloud, Method method, int k,
                      const BinningConfig* binning = nullptr);

struct BenchPlan {
  std::vector<int> dims{3, 5};
  std::vector<Index> sizes{1000};
  std::vector<int> ks{10, 40};
  int splits = 1;
  std::uint64_t seed = 1;
  int repeats = 5;
  std::vector<Method> methods{Method::Binned, Method::Brute};
  Distribution distribution = Distribution::Uniform;

  /// Throws BadConfig for empty lists or repeats < 1.
  void validate() const;
};

struct BenchOutcome {
  std::vector<BenchRecord> records;
  std::vector<std::string> failures;   // cells aborted on checksum mismatch
  std::vector<std::string> anomalies;  // soft warnings
};

/// Each cell: one discarded warm-up run (which also supplies mem_bytes),
/// then `repeats` timed runs; the reported time is their median.
BenchOutcome run_bench(const BenchPlan& plan, std::ostream* log = nullptr);

double median(std::vector<double> values);

}  // namespace fastgraph::harness
