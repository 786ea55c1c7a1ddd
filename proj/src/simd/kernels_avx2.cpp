// AVX2 variants of the kernels in kernels_scalar.cpp. This translation unit
// is compiled with -mavx2 (and without -mfma); it is only entered after the
// dispatcher confirmed CPU support.

#include "fastgraph/simd/kernels.hpp"

#if defined(FASTGRAPH_HAVE_AVX2)

#include <immintrin.h>

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

// Four rows at 64-bit element offsets `offs`; one gather per dimension.
inline __m256d sq_dist4(const double* coords, __m256i offs, const double* query, int n_c) {
  __m256d acc = _mm256_setzero_pd();
  for (int c = 0; c < n_c; ++c) {
    const __m256d x = _mm256_i64gather_pd(coords + c, offs, 8);
    const __m256d diff = _mm256_sub_pd(x, _mm256_set1_pd(query[c]));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
  }
  return acc;
}

void sq_dist_gather(const double* coords, int n_c, const double* query, const std::int32_t* ids,
                    std::size_t count, double* out) {
  const __m256i stride = _mm256_set1_epi64x(n_c);
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    const __m128i id4 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ids + j));
    const __m256i offs = _mm256_mul_epi32(_mm256_cvtepi32_epi64(id4), stride);
    _mm256_storeu_pd(out + j, sq_dist4(coords, offs, query, n_c));
  }
  for (; j < count; ++j) {
    out[j] = sq_dist_row(coords + static_cast<std::size_t>(ids[j]) * n_c, query, n_c);
  }
}

void sq_dist_range(const double* coords, int n_c, const double* query, std::int32_t first,
                   std::size_t count, double* out) {
  const double* base = coords + static_cast<std::size_t>(first) * n_c;
  const __m256i lane_offs = _mm256_setr_epi64x(0, n_c, 2LL * n_c, 3LL * n_c);
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    _mm256_storeu_pd(out + j, sq_dist4(base + j * n_c, lane_offs, query, n_c));
  }
  for (; j < count; ++j) out[j] = sq_dist_row(base + j * n_c, query, n_c);
}

void scaled_add(double w, const double* x, double* out, std::size_t n) {
  const __m256d wv = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(wv, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), prod));
  }
  for (; i < n; ++i) out[i] += w * x[i];
}

void scaled_max(double w, const double* x, double* out, std::size_t n) {
  const __m256d wv = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_mul_pd(wv, _mm256_loadu_pd(x + i));
    // max_pd(a, b) is (a > b ? a : b), matching the scalar keep-unless-greater rule.
    _mm256_storeu_pd(out + i, _mm256_max_pd(v, _mm256_loadu_pd(out + i)));
  }
  for (; i < n; ++i) {
    const double v = w * x[i];
    if (v > out[i]) out[i] = v;
  }
}

constexpr KernelTable kAvx2Table{
    Backend::Avx2, "avx2", &sq_dist_gather, &sq_dist_range, &scaled_add, &scaled_max,
};

}  // namespace

const KernelTable* avx2_kernels() noexcept { return &kAvx2Table; }

}  // namespace fastgraph::simd

#else

namespace fastgraph::simd {
const KernelTable* avx2_kernels() noexcept { return nullptr; }
}  // namespace fastgraph::simd

#endif
