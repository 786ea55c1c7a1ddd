#include "fastgraph/harness/results.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "fastgraph/harness/io.hpp"
#include "json.hpp"

namespace fastgraph::harness {
namespace {

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

template <typename T>
T parse_number(std::string_view field, int base = 10) {
  T value{};
  std::from_chars_result r;
  if constexpr (std::is_floating_point_v<T>) {
    r = std::from_chars(field.data(), field.data() + field.size(), value);
  } else {
    r = std::from_chars(field.data(), field.data() + field.size(), value, base);
  }
  if (r.ec != std::errc() || r.ptr != field.data() + field.size()) {
    throw Error(ErrorCode::IoError, "bad numeric field '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

}  // namespace

bool parse_result_format(std::string_view text, ResultFormat& out) noexcept {
  if (text == "csv") {
    out = ResultFormat::Csv;
    return true;
  }
  if (text == "jsonl") {
    out = ResultFormat::Jsonl;
    return true;
  }
  return false;
}

std::string checksum_hex(std::uint64_t checksum) {
  std::array<char, 17> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + 16, checksum, 16);
  std::string digits(buf.data(), ptr);
  return std::string(16 - digits.size(), '0') + digits;
}

std::string format_results(const std::vector<BenchRecord>& records, ResultFormat format) {
  std::string out;
  if (format == ResultFormat::Csv) {
    out.append(kCsvHeader).push_back('\n');
    for (const auto& r : records) {
      out += r.method + ',' + std::to_string(r.n) + ',' + std::to_string(r.d) + ',' +
             std::to_string(r.k) + ',' + std::to_string(r.splits) + ',' + format_double(r.time_s) +
             ',' + format_double(r.qps) + ',' + std::to_string(r.mem_bytes) + ',' +
             checksum_hex(r.checksum) + '\n';
    }
    return out;
  }
  for (const auto& r : records) {
    nlohmann::ordered_json row;
    row["method"] = r.method;
    row["n"] = r.n;
    row["d"] = r.d;
    row["k"] = r.k;
    row["splits"] = r.splits;
    row["time_s"] = r.time_s;
    row["qps"] = r.qps;
    row["mem_bytes"] = r.mem_bytes;
    row["checksum"] = checksum_hex(r.checksum);
    out += row.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<BenchRecord> parse_results(std::string_view text, ResultFormat format) {
  std::vector<BenchRecord> records;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.empty()) continue;

    if (format == ResultFormat::Csv) {
      if (line_no == 1) {
        if (line != kCsvHeader) throw Error(ErrorCode::IoError, "unexpected CSV header");
        continue;
      }
      const auto f = split_csv(line);
      if (f.size() != 9) throw Error(ErrorCode::IoError, "expected 9 CSV fields");
      records.push_back(BenchRecord{std::string(f[0]), parse_number<Index>(f[1]),
                                    parse_number<int>(f[2]), parse_number<int>(f[3]),
                                    parse_number<int>(f[4]), parse_number<double>(f[5]),
                                    parse_number<double>(f[6]),
                                    parse_number<std::uint64_t>(f[7]),
                                    parse_number<std::uint64_t>(f[8], 16)});
    } else {
      try {
        const auto row = nlohmann::json::parse(line);
        records.push_back(BenchRecord{
            row.at("method").get<std::string>(), row.at("n").get<Index>(), row.at("d").get<int>(),
            row.at("k").get<int>(), row.at("splits").get<int>(), row.at("time_s").get<double>(),
            row.at("qps").get<double>(), row.at("mem_bytes").get<std::uint64_t>(),
            parse_number<std::uint64_t>(row.at("checksum").get<std::string>(), 16)});
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("bad JSON line: ") + e.what());
      }
    }
  }
  return records;
}

void emit_results(const std::vector<BenchRecord>& records, ResultFormat format,
                  const std::filesystem::path& path) {
  if (records.empty()) throw Error(ErrorCode::BadShape, "no records to emit");
  write_file(path, format_results(records, format));
}

}  // namespace fastgraph::harness
