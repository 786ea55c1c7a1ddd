#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fastgraph/core.hpp"

namespace fastgraph::harness {

struct BenchRecord {
  std::string method;
  Index n = 0;
  int d = 0;
  int k = 0;
  int splits = 0;
  double time_s = 0.0;
  double qps = 0.0;
  std::uint64_t mem_bytes = 0;
  std::uint64_t checksum = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

enum class ResultFormat { Csv, Jsonl };

bool parse_result_format(std::string_view text, ResultFormat& out) noexcept;

inline constexpr std::string_view kCsvHeader = "method,n,d,k,splits,time_s,qps,mem_bytes,checksum";

/// Locale-independent; doubles use the shortest round-trip representation
/// and checksums 16 hex digits.
std::string format_results(const std::vector<BenchRecord>& records, ResultFormat format);
std::vector<BenchRecord> parse_results(std::string_view text, ResultFormat format);

/// Throws BadShape for an empty record list and IoError on write failure.
void emit_results(const std::vector<BenchRecord>& records, ResultFormat format,
                  const std::filesystem::path& path);

std::string checksum_hex(std::uint64_t checksum);

}  // namespace fastgraph::harness
