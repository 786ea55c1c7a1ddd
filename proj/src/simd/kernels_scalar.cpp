#include "fastgraph/simd/kernels.hpp"

namespace fastgraph::simd {
namespace {

inline double sq_dist_row(const double* row, const double* query, int n_c) {
  double acc = 0.0;
  for (int c = 0; c < n_c; ++c) {
    const double diff = row[c] - query[c];
    acc += diff * diff;
  }
  return acc;
}

void sq_dist_gather(const double* coords, int n_c, const double* query, const std::int32_t* ids,
                    std::size_t count, double* out) {
  for (std::size_t j = 0; j < count; ++j) {
    out[j] = sq_dist_row(coords + static_cast<std::size_t>(ids[j]) * n_c, query, n_c);
  }
}

void sq_dist_range(const double* coords, int n_c, const double* query, std::int32_t first,
                   std::size_t count, double* out) {
  const double* row = coords + static_cast<std::size_t>(first) * n_c;
  for (std::size_t j = 0; j < count; ++j, row += n_c) out[j] = sq_dist_row(row, query, n_c);
}

void scaled_add(double w, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += w * x[i];
}

void scaled_max(double w, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = w * x[i];
    if (v > out[i]) out[i] = v;
  }
}

constexpr KernelTable kScalarTable{
    Backend::Scalar, "scalar", &sq_dist_gather, &sq_dist_range, &scaled_add, &scaled_max,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalarTable; }

}  // namespace fastgraph::simd
