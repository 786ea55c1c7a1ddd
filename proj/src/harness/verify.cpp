#include "fastgraph/harness/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <utility>

#include "fastgraph/binning.hpp"
#include "fastgraph/harness/results.hpp"
#include "fastgraph/knn.hpp"

namespace fastgraph::harness {
namespace {

using Slot = std::pair<double, Index>;

std::vector<Slot> valid_slots(const NeighborMatrix& nm, Index v) {
  std::vector<Slot> slots;
  const auto idx = nm.index_row(v);
  const auto d2 = nm.dist_row(v);
  for (int s = 0; s < nm.k; ++s) {
    if (idx[s] >= 0) slots.emplace_back(d2[s], idx[s]);
  }
  std::sort(slots.begin(), slots.end());
  return slots;
}

std::vector<Index> indices_below(const std::vector<Slot>& slots, double limit) {
  std::vector<Index> out;
  for (const auto& [d, i] : slots) {
    if (d < limit) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void sort_neighbor_rows(NeighborMatrix& nm) {
  std::vector<Slot> tail;
  for (Index v = 0; v < nm.n_v; ++v) {
    auto idx = nm.index_row(v);
    auto d2 = nm.dist_row(v);
    tail.clear();
    for (int s = 1; s < nm.k; ++s) {
      if (idx[s] >= 0) tail.emplace_back(d2[s], idx[s]);
    }
    std::sort(tail.begin(), tail.end());
    for (int s = 1; s < nm.k; ++s) {
      const std::size_t t = static_cast<std::size_t>(s - 1);
      idx[s] = t < tail.size() ? tail[t].second : kNoIndex;
      d2[s] = t < tail.size() ? tail[t].first : 0.0;
    }
  }
}

std::uint64_t distance_checksum(const NeighborMatrix& nm) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  std::vector<double> row;
  for (Index v = 0; v < nm.n_v; ++v) {
    row.clear();
    const auto idx = nm.index_row(v);
    const auto d2 = nm.dist_row(v);
    for (int s = 0; s < nm.k; ++s) {
      if (idx[s] >= 0) row.push_back(d2[s]);
    }
    std::sort(row.begin(), row.end());
    mix(row.size());
    for (double d : row) mix(std::bit_cast<std::uint64_t>(d));
  }
  return h;
}

bool has_distinct_pair_distances(const PointCloud& cloud) {
  const RowSplits& rs = cloud.row_splits();
  std::vector<double> all;
  for (std::size_t s = 0; s < rs.num_splits(); ++s) {
    all.clear();
    for (Index a = rs.begin(s); a < rs.end(s); ++a) {
      for (Index b = a + 1; b < rs.end(s); ++b) {
        double acc = 0.0;
        for (int c = 0; c < cloud.num_dims(); ++c) {
          const double diff = cloud.at(a, c) - cloud.at(b, c);
          acc += diff * diff;
        }
        all.push_back(acc);
      }
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) return false;
  }
  return true;
}

OracleComparison compare_to_oracle(const NeighborMatrix& candidate, const NeighborMatrix& oracle,
                                   double rel_tol, bool full_index_sets) {
  OracleComparison out;
  if (candidate.n_v != oracle.n_v || candidate.k != oracle.k) {
    out.distances_match = out.indices_match = false;
    out.message = "shape mismatch";
    return out;
  }
  auto fail = [&out](Index v, const std::string& why, bool distances) {
    if (distances) out.distances_match = false;
    out.indices_match = false;
    if (out.first_bad_vertex == kNoIndex) {
      out.first_bad_vertex = v;
      out.message = "vertex " + std::to_string(v) + ": " + why;
    }
  };

  for (Index v = 0; v < oracle.n_v; ++v) {
    const auto got = valid_slots(candidate, v);
    const auto want = valid_slots(oracle, v);
    if (got.size() != want.size()) {
      fail(v, "neighbor count " + std::to_string(got.size()) + " vs " + std::to_string(want.size()),
           true);
      continue;
    }
    bool row_ok = true;
    for (std::size_t j = 0; j < got.size(); ++j) {
      const double a = got[j].first;
      const double b = want[j].first;
      const double scale = std::max(std::abs(a), std::abs(b));
      const double rel = scale > 0.0 ? std::abs(a - b) / scale : 0.0;
      out.max_rel_error = std::max(out.max_rel_error, rel);
      if (rel > rel_tol) row_ok = false;
    }
    if (!row_ok) {
      fail(v, "sorted distance lists differ", true);
      continue;
    }
    if (got.empty()) continue;
    if (full_index_sets) {
      std::vector<Index> gi, wi;
      for (const auto& s : got) gi.push_back(s.second);
      for (const auto& s : want) wi.push_back(s.second);
      std::sort(gi.begin(), gi.end());
      std::sort(wi.begin(), wi.end());
      if (gi != wi) fail(v, "index sets differ", false);
    } else if (indices_below(got, got.back().first) != indices_below(want, want.back().first)) {
      fail(v, "index sets differ below the boundary distance", false);
    }
  }
  return out;
}

bool respects_row_splits(const NeighborMatrix& nm, const RowSplits& rs) {
  for (Index v = 0; v < nm.n_v; ++v) {
    const std::size_t split = rs.split_of(v);
    for (Index n : nm.index_row(v)) {
      if (n >= 0 && (n < rs.begin(split) || n >= rs.end(split))) return false;
    }
  }
  return true;
}

std::uint64_t case_seed(std::uint64_t seed, Index n, int d, int k, int splits) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = splitmix64(h ^ static_cast<std::uint64_t>(d));
  h = splitmix64(h ^ static_cast<std::uint64_t>(k));
  return splitmix64(h ^ static_cast<std::uint64_t>(splits));
}

std::vector<VerifyCase> run_verify(const VerifyPlan& plan) {
  std::vector<VerifyCase> cases;
  for (Index n : plan.sizes) {
    for (int d : plan.dims) {
      for (int k : plan.ks) {
        for (int splits : plan.splits) {
          VerifyCase vc;
          vc.n = n;
          vc.d = d;
          vc.k = k;
          vc.splits = splits;
          try {
            const PointCloud cloud =
                generate_dataset(n, d, splits, case_seed(plan.seed, n, d, k, splits), plan.distribution);
            KnnOptions opts;
            opts.k = k;
            const BinIndex index = build_bin_index(cloud, BinningConfig::for_cloud(cloud, k));
            const NeighborMatrix binned = binned_select_knn(cloud, index, opts);
            const NeighborMatrix brute = brute_force_knn(cloud, opts);
            vc.checksum_binned = distance_checksum(binned);
            vc.checksum_brute = distance_checksum(brute);

            const bool full_sets = n <= 2000 && has_distinct_pair_distances(cloud);
            const OracleComparison cmp = compare_to_oracle(binned, brute, plan.rel_tol, full_sets);
            bool self_first = true;
            for (Index v = 0; v < n; ++v) {
              if (binned.index_row(v)[0] != v || binned.dist_row(v)[0] != 0.0) self_first = false;
            }
            if (!respects_row_splits(binned, cloud.row_splits())) {
              vc.detail = "cross-split neighbor";
            } else if (!self_first) {
              vc.detail = "self slot violated";
            } else if (!cmp.ok(full_sets)) {
              vc.detail = cmp.message;
            } else if (vc.checksum_binned != vc.checksum_brute) {
              vc.detail = "checksum mismatch";
            } else {
              vc.passed = true;
              vc.detail = full_sets ? "exact-sets" : "exact";
            }
          } catch (const Error& e) {
            vc.detail = e.what();
          }
          cases.push_back(std::move(vc));
        }
      }
    }
  }
  return cases;
}

namespace {

std::string sanitized(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

}  // namespace

std::string format_verify_report(const std::vector<VerifyCase>& cases) {
  std::string out = "n,d,k,splits,status,checksum_binned,checksum_brute,detail\n";
  for (const auto& c : cases) {
    out += std::to_string(c.n) + ',' + std::to_string(c.d) + ',' + std::to_string(c.k) + ',' +
           std::to_string(c.splits) + ',' + (c.passed ? "pass" : "FAIL") + ',' +
           checksum_hex(c.checksum_binned) + ',' + checksum_hex(c.checksum_brute) + ',' +
           sanitized(c.detail) + '\n';
  }
  return out;
}

}  // namespace fastgraph::harness
