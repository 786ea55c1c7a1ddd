// fastgraph command-line harness: dataset synthesis, kNN runs, oracle
// verification, benchmarks and object-condensation index building.
//
// Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fastgraph/binning.hpp"
#include "fastgraph/harness/bench.hpp"
#include "fastgraph/harness/dataset.hpp"
#include "fastgraph/harness/io.hpp"
#include "fastgraph/harness/results.hpp"
#include "fastgraph/harness/verify.hpp"
#include "fastgraph/knn.hpp"
#include "fastgraph/ocgraph.hpp"
#include "fastgraph/parallel.hpp"
#include "fastgraph/simd/kernels.hpp"

namespace fg = fastgraph;
namespace fgh = fastgraph::harness;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitIo = 3;

struct GenArgs {
  fg::Index n = 1000;
  int d = 3;
  int splits = 1;
  std::uint64_t seed = 1;
  std::string distribution = "uniform";
  std::string out;
  std::string assoc_out;
  int objects = 10;
  double noise = 0.1;
};

struct KnnArgs {
  std::string in;
  std::string out;
  int k = 10;
  std::optional<int> dims_bin;
  std::optional<int> n_bins;
  std::string method = "binned";
  bool sorted = false;
};

struct VerifyArgs {
  std::vector<int> dims{2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<fg::Index> sizes{100, 1000, 10000};
  std::vector<int> ks{1, 10, 40};
  std::vector<int> splits{1, 4};
  std::uint64_t seed = 1;
  std::string distribution = "uniform";
  std::string out;
};

struct BenchArgs {
  std::vector<int> dims{3, 5};
  std::vector<fg::Index> sizes{1000, 10000};
  std::vector<int> ks{10, 40};
  int splits = 1;
  std::uint64_t seed = 1;
  int repeats = 5;
  std::vector<std::string> methods{"binned", "brute"};
  std::string format = "csv";
  std::string distribution = "uniform";
  std::string out;
};

struct OcArgs {
  std::string in;
  std::string out;
  std::optional<fg::Index> n_maxuq;
  std::optional<fg::Index> n_maxrs;
  bool no_m_not = false;
};

fgh::Distribution distribution_or_throw(const std::string& text) {
  fgh::Distribution d;
  if (!fgh::parse_distribution(text, d)) {
    throw fg::Error(fg::ErrorCode::BadConfig, "unknown distribution '" + text + "'");
  }
  return d;
}

int run_gen(const GenArgs& a) {
  const fg::PointCloud cloud =
      fgh::generate_dataset(a.n, a.d, a.splits, a.seed, distribution_or_throw(a.distribution));
  fgh::write_points(a.out, cloud);
  std::cerr << "wrote " << a.n << " points (d=" << a.d << ", splits=" << a.splits << ") to "
            << a.out << '\n';
  if (!a.assoc_out.empty()) {
    const fg::Associations assoc =
        fgh::generate_associations(cloud.row_splits(), a.objects, a.noise, a.seed ^ 0xa550c1a7eULL);
    fgh::write_associations(a.assoc_out, assoc);
    std::cerr << "wrote associations to " << a.assoc_out << '\n';
  }
  return kExitOk;
}

int run_knn(const KnnArgs& a) {
  const fg::PointCloud cloud = fgh::load_points(a.in);
  fgh::Method method;
  if (!fgh::parse_method(a.method, method)) {
    throw fg::Error(fg::ErrorCode::BadConfig, "unknown method '" + a.method + "'");
  }
  std::optional<fg::BinningConfig> cfg;
  if (method == fgh::Method::Binned) {
    cfg = fg::BinningConfig::for_cloud(cloud, a.k);
    if (a.dims_bin) cfg->d_bin = *a.dims_bin;
    cfg->n_bins_override = a.n_bins;
  }
  fgh::KnnRun run = fgh::run_knn_method(cloud, method, a.k, cfg ? &*cfg : nullptr);
  if (a.sorted) fgh::sort_neighbor_rows(run.result);
  fgh::write_neighbors(a.out, run.result);
  std::cerr << fgh::method_name(method) << " k=" << a.k << " n=" << cloud.num_vertices()
            << " time_s=" << run.seconds << " aux_bytes=" << run.aux_bytes
            << " index_bytes=" << run.index_bytes << " simd=" << fg::simd::kernels().name << '\n';
  return kExitOk;
}

int run_verify_cmd(const VerifyArgs& a) {
  fgh::VerifyPlan plan;
  plan.dims = a.dims;
  plan.sizes = a.sizes;
  plan.ks = a.ks;
  plan.splits = a.splits;
  plan.seed = a.seed;
  plan.distribution = distribution_or_throw(a.distribution);
  const auto cases = fgh::run_verify(plan);
  const std::string report = fgh::format_verify_report(cases);
  if (!a.out.empty()) {
    fgh::write_file(a.out, report);
  } else {
    std::cout << report;
  }
  std::size_t failed = 0;
  for (const auto& c : cases) failed += c.passed ? 0 : 1;
  std::cerr << cases.size() - failed << "/" << cases.size() << " cases match the oracle\n";
  return failed == 0 ? kExitOk : kExitVerify;
}

int run_bench_cmd(const BenchArgs& a) {
  fgh::BenchPlan plan;
  plan.dims = a.dims;
  plan.sizes = a.sizes;
  plan.ks = a.ks;
  plan.splits = a.splits;
  plan.seed = a.seed;
  plan.repeats = a.repeats;
  plan.distribution = distribution_or_throw(a.distribution);
  plan.methods.clear();
  for (const auto& m : a.methods) {
    fgh::Method method;
    if (!fgh::parse_method(m, method)) {
      throw fg::Error(fg::ErrorCode::BadConfig, "unknown method '" + m + "'");
    }
    plan.methods.push_back(method);
  }
  fgh::ResultFormat format;
  if (!fgh::parse_result_format(a.format, format)) {
    throw fg::Error(fg::ErrorCode::BadConfig, "unknown format '" + a.format + "'");
  }
  const fgh::BenchOutcome outcome = fgh::run_bench(plan, &std::cerr);
  if (!outcome.records.empty()) {
    if (!a.out.empty()) {
      fgh::emit_results(outcome.records, format, a.out);
    } else {
      std::cout << fgh::format_results(outcome.records, format);
    }
  }
  return outcome.failures.empty() ? kExitOk : kExitVerify;
}

int run_ochelper(const OcArgs& a) {
  const fg::Associations assoc = fgh::read_associations(a.in);
  const fg::UniqueObjects uniq = fg::find_unique(assoc);
  const fg::SameCounts counts = fg::max_same_count(assoc, uniq);
  const fg::Index n_maxuq = a.n_maxuq.value_or(std::max<fg::Index>(1, counts.n_maxuq));
  const fg::Index n_maxrs = a.n_maxrs.value_or(std::max<fg::Index>(1, assoc.rs.max_split_size()));
  const fg::AssociationMatrices mats = fg::oc_helper(assoc, uniq, n_maxuq, n_maxrs, !a.no_m_not);
  fgh::write_association_matrices(a.out, uniq, mats);
  std::cerr << "objects=" << uniq.size() << " n_maxuq=" << n_maxuq << " n_maxrs=" << n_maxrs
            << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fastgraph: binned exact kNN for low-dimensional batched point clouds"};
  app.require_subcommand(1);
  int threads = 0;
  std::string simd;
  app.add_option("--threads", threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--simd", simd, "kernel backend: scalar|avx2 (default: best available)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "synthesize a point file");
  gen_cmd->add_option("--n", gen.n, "number of points")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--d", gen.d, "dimensions")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--splits", gen.splits, "row splits")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "PRNG seed");
  gen_cmd->add_option("--distribution", gen.distribution, "uniform|clusters");
  gen_cmd->add_option("--out", gen.out, "output point file")->required();
  gen_cmd->add_option("--assoc-out", gen.assoc_out, "also write a random association file");
  gen_cmd->add_option("--objects", gen.objects, "objects per split for --assoc-out");
  gen_cmd->add_option("--noise", gen.noise, "unassociated fraction for --assoc-out");

  KnnArgs knn;
  auto* knn_cmd = app.add_subcommand("knn", "run kNN on a point file (.fgc or .csv)");
  knn_cmd->add_option("--in", knn.in, "input point file")->required();
  knn_cmd->add_option("--out", knn.out, "output neighbor file")->required();
  knn_cmd->add_option("--k", knn.k, "neighbors per vertex, self included");
  knn_cmd->add_option("--dims-bin", knn.dims_bin, "binning dimensions (default min(n_c,5))");
  knn_cmd->add_option("--n-bins", knn.n_bins, "bins per dimension override");
  knn_cmd->add_option("--method", knn.method, "binned|brute");
  knn_cmd->add_flag("--sorted", knn.sorted, "sort slots 1..K-1 by distance");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "binned vs brute-force oracle sweep");
  ver_cmd->add_option("--dims", ver.dims)->delimiter(',');
  ver_cmd->add_option("--sizes", ver.sizes)->delimiter(',');
  ver_cmd->add_option("--ks", ver.ks)->delimiter(',');
  ver_cmd->add_option("--splits", ver.splits)->delimiter(',');
  ver_cmd->add_option("--seed", ver.seed);
  ver_cmd->add_option("--distribution", ver.distribution);
  ver_cmd->add_option("--out", ver.out, "report file (default stdout)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "timing sweep");
  bench_cmd->add_option("--dims", bench.dims)->delimiter(',');
  bench_cmd->add_option("--sizes", bench.sizes)->delimiter(',');
  bench_cmd->add_option("--ks", bench.ks)->delimiter(',');
  bench_cmd->add_option("--splits", bench.splits);
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--repeats", bench.repeats);
  bench_cmd->add_option("--methods", bench.methods)->delimiter(',');
  bench_cmd->add_option("--format", bench.format, "csv|jsonl");
  bench_cmd->add_option("--distribution", bench.distribution);
  bench_cmd->add_option("--out", bench.out, "results file (default stdout)");

  OcArgs oc;
  auto* oc_cmd = app.add_subcommand("ochelper", "build object-condensation index matrices");
  oc_cmd->add_option("--in", oc.in, "association file")->required();
  oc_cmd->add_option("--out", oc.out, "output matrices file")->required();
  oc_cmd->add_option("--n-maxuq", oc.n_maxuq, "member capacity (default: tight)");
  oc_cmd->add_option("--n-maxrs", oc.n_maxrs, "complement capacity (default: largest split)");
  oc_cmd->add_flag("--no-m-not", oc.no_m_not, "skip the complement matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    fg::set_num_threads(threads);
    if (!simd.empty()) {
      fg::simd::Backend backend;
      if (!fg::simd::parse_backend(simd, backend)) {
        std::cerr << "error: unknown SIMD backend '" << simd << "'\n";
        return kExitUsage;
      }
      fg::simd::set_backend(backend);
    }
    if (*gen_cmd) return run_gen(gen);
    if (*knn_cmd) return run_knn(knn);
    if (*ver_cmd) return run_verify_cmd(ver);
    if (*bench_cmd) return run_bench_cmd(bench);
    if (*oc_cmd) return run_ochelper(oc);
  } catch (const fg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.code() == fg::ErrorCode::IoError) return kExitIo;
    if (e.code() == fg::ErrorCode::VerificationFailed) return kExitVerify;
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
