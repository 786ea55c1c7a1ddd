#pragma once

// Data-parallel inner loops with a scalar reference and ISA-specific
// variants selected at runtime.
//
// Every variant must produce results bit-identical to the scalar kernels:
// squared distances accumulate dimension by dimension in ascending order
// using a separate multiply and add (no fused multiply-add), so each SIMD
// lane performs exactly the scalar operation sequence. The equivalence
// tests rely on this.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace fastgraph::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  const char* name;

  /// out[j] = sum_c (coords[ids[j]*n_c + c] - query[c])^2
  void (*sq_dist_gather)(const double* coords, int n_c, const double* query,
                         const std::int32_t* ids, std::size_t count, double* out);

  /// out[j] = sum_c (coords[(first+j)*n_c + c] - query[c])^2
  void (*sq_dist_range)(const double* coords, int n_c, const double* query,
                        std::int32_t first, std::size_t count, double* out);

  /// out[i] += w * x[i]
  void (*scaled_add)(double w, const double* x, double* out, std::size_t n);

  /// out[i] = max(out[i], w * x[i])
  void (*scaled_max)(double w, const double* x, double* out, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// Whether the backend was compiled in and the running CPU supports it.
bool backend_supported(Backend backend) noexcept;

/// Kernel table for a specific backend. Throws std::invalid_argument if the
/// backend is unsupported.
const KernelTable& kernels_for(Backend backend);

/// Currently active kernels. Defaults to the widest supported backend; the
/// FASTGRAPH_SIMD environment variable (scalar|avx2) overrides the default.
const KernelTable& kernels() noexcept;

void set_backend(Backend backend);
Backend active_backend() noexcept;

std::string_view backend_name(Backend backend) noexcept;
bool parse_backend(std::string_view text, Backend& out) noexcept;

}  // namespace fastgraph::simd
