#include "fastgraph/harness/bench.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <ostream>

#include "fastgraph/harness/alloc_tracker.hpp"
#include "fastgraph/harness/verify.hpp"
#include "fastgraph/knn.hpp"

namespace fastgraph::harness {

std::string_view method_name(Method m) noexcept { return m == Method::Binned ? "binned" : "brute"; }

bool parse_method(std::string_view text, Method& out) noexcept {
  if (text == "binned") {
    out = Method::Binned;
    return true;
  }
  if (text == "brute") {
    out = Method::Brute;
    return true;
  }
  return false;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

KnnRun run_knn_method(const PointCloud& cloud, Method method, int k, const BinningConfig* binning) {
  KnnOptions opts;
  opts.k = k;
  KnnRun run;

  const std::size_t baseline = alloc_tracker::current_bytes();
  alloc_tracker::reset_peak();
  const auto start = std::chrono::steady_clock::now();
  if (method == Method::Binned) {
    const BinningConfig cfg = binning != nullptr ? *binning : BinningConfig::for_cloud(cloud, k);
    const BinIndex index = build_bin_index(cloud, cfg);
    run.result = binned_select_knn(cloud, index, opts);
    run.index_bytes = index.memory_bytes();
  } else {
    run.result = brute_force_knn(cloud, opts);
  }
  const auto stop = std::chrono::steady_clock::now();
  const std::size_t growth = alloc_tracker::peak_above(baseline);
  const std::size_t output = run.result.memory_bytes();

  run.seconds = std::chrono::duration<double>(stop - start).count();
  run.aux_bytes = growth > output ? growth - output : 0;
  return run;
}

void BenchPlan::validate() const {
  if (dims.empty() || sizes.empty() || ks.empty() || methods.empty()) {
    throw Error(ErrorCode::BadConfig, "bench plan lists must be non-empty");
  }
  if (repeats < 1) throw Error(ErrorCode::BadConfig, "repeats must be >= 1");
  if (splits < 1) throw Error(ErrorCode::BadConfig, "splits must be >= 1");
}

BenchOutcome run_bench(const BenchPlan& plan, std::ostream* log) {
  plan.validate();
  BenchOutcome outcome;
  for (Index n : plan.sizes) {
    for (int d : plan.dims) {
      for (int k : plan.ks) {
        const PointCloud cloud =
            generate_dataset(n, d, plan.splits, case_seed(plan.seed, n, d, k, plan.splits),
                             plan.distribution);
        std::vector<BenchRecord> cell;
        std::map<Method, double> times;
        for (Method method : plan.methods) {
          // Warm-up run: discarded for timing, supplies memory and checksum.
          KnnRun warm = run_knn_method(cloud, method, k);
          std::vector<double> samples;
          for (int r = 0; r < plan.repeats; ++r) {
            samples.push_back(std::max(run_knn_method(cloud, method, k).seconds, 1e-9));
          }
          const double t = median(samples);
          times[method] = t;
          cell.push_back(BenchRecord{std::string(method_name(method)), n, d, k, plan.splits, t,
                                     static_cast<double>(n) / t, warm.aux_bytes,
                                     distance_checksum(warm.result)});
          if (log != nullptr) {
            *log << method_name(method) << " n=" << n << " d=" << d << " k=" << k
                 << " splits=" << plan.splits << " median " << t << " s\n";
          }
        }

        const std::string label = "n=" + std::to_string(n) + " d=" + std::to_string(d) +
                                  " k=" + std::to_string(k) + " splits=" + std::to_string(plan.splits);
        const bool mismatch = std::any_of(cell.begin(), cell.end(), [&](const BenchRecord& r) {
          return r.checksum != cell.front().checksum;
        });
        if (mismatch) {
          outcome.failures.push_back("checksum mismatch at " + label);
          if (log != nullptr) *log << "VerificationFailed: checksum mismatch at " << label << '\n';
          continue;
        }
        if (times.count(Method::Binned) && times.count(Method::Brute) && n >= 100000 && d <= 5 &&
            times[Method::Brute] < times[Method::Binned]) {
          outcome.anomalies.push_back("brute faster than binned at " + label);
          if (log != nullptr) *log << "warning: brute faster than binned at " << label << '\n';
        }
        outcome.records.insert(outcome.records.end(), cell.begin(), cell.end());
      }
    }
  }
  return outcome;
}

}  // namespace fastgraph::harness
