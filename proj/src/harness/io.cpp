#include "fastgraph/harness/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>
#include <vector>

namespace fastgraph::harness {
namespace {

static_assert(std::endian::native == std::endian::little,
              "file encoding assumes a little-endian host");

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
  throw Error(ErrorCode::IoError, path.string() + ": " + what);
}

class Writer {
 public:
  void magic(const char (&tag)[5]) { bytes_.append(tag, 4); }
  template <typename T>
  void put(T value) {
    char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    bytes_.append(raw, sizeof(T));
  }
  const std::string& bytes() const { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  Reader(const std::filesystem::path& path, std::string bytes)
      : path_(path), bytes_(std::move(bytes)) {}

  void expect_magic(const char (&tag)[5]) {
    need(4);
    if (std::string_view(bytes_).substr(pos_, 4) != std::string_view(tag, 4)) {
      io_fail(path_, std::string("bad magic, expected ") + tag);
    }
    pos_ += 4;
  }
  template <typename T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  void expect_end() const {
    if (pos_ != bytes_.size()) io_fail(path_, "trailing bytes after payload");
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) io_fail(path_, "truncated file");
  }

  std::filesystem::path path_;
  std::string bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t to_u32(std::size_t n, const std::filesystem::path& path) {
  if (n > std::numeric_limits<std::uint32_t>::max()) io_fail(path, "count exceeds u32");
  return static_cast<std::uint32_t>(n);
}

RowSplits read_offsets(Reader& in, std::uint32_t n_splits, std::uint32_t n_v,
                       const std::filesystem::path& path) {
  std::vector<Index> offsets(static_cast<std::size_t>(n_splits) + 1);
  for (Index& off : offsets) {
    const std::int64_t raw = in.get<std::int64_t>();
    if (raw < 0 || raw > std::numeric_limits<Index>::max()) io_fail(path, "row-split offset out of range");
    off = static_cast<Index>(raw);
  }
  try {
    return RowSplits::validate(std::move(offsets), static_cast<Index>(n_v));
  } catch (const Error& e) {
    io_fail(path, e.what());
  }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) io_fail(path, "read error");
  return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_fail(path, "cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) io_fail(path, "write error");
}

void write_points(const std::filesystem::path& path, const PointCloud& cloud) {
  Writer w;
  w.magic("FGC1");
  w.put<std::uint32_t>(to_u32(static_cast<std::size_t>(cloud.num_vertices()), path));
  w.put<std::uint32_t>(to_u32(static_cast<std::size_t>(cloud.num_dims()), path));
  w.put<std::uint32_t>(to_u32(cloud.row_splits().num_splits(), path));
  for (Index off : cloud.row_splits().offsets()) w.put<std::int64_t>(off);
  for (double x : cloud.coords()) w.put<float>(static_cast<float>(x));
  write_file(path, w.bytes());
}

PointCloud read_points(const std::filesystem::path& path) {
  Reader in(path, read_file(path));
  in.expect_magic("FGC1");
  const auto n_v = in.get<std::uint32_t>();
  const auto n_c = in.get<std::uint32_t>();
  const auto n_splits = in.get<std::uint32_t>();
  if (n_c == 0 || n_splits == 0) io_fail(path, "point file needs n_c >= 1 and n_splits >= 1");
  RowSplits rs = read_offsets(in, n_splits, n_v, path);
  std::vector<double> coords(static_cast<std::size_t>(n_v) * n_c);
  for (double& x : coords) x = in.get<float>();
  in.expect_end();
  try {
    return PointCloud(std::move(coords), static_cast<int>(n_c), std::move(rs));
  } catch (const Error& e) {
    io_fail(path, e.what());
  }
}

PointCloud read_points_csv(const std::filesystem::path& path) {
  std::istringstream text(read_file(path));
  std::vector<double> coords;
  std::vector<Index> offsets{0};
  int n_c = 0;
  Index n_v = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(text, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    if (line.find_first_not_of(" \t") == std::string::npos) {
      if (offsets.back() != n_v) offsets.push_back(n_v);
      continue;
    }
    int fields = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      std::string_view field = rest.substr(0, comma);
      while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
      while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
        io_fail(path, "line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
      }
      coords.push_back(value);
      ++fields;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (n_c == 0) n_c = fields;
    if (fields != n_c) {
      io_fail(path, "line " + std::to_string(line_no) + ": expected " + std::to_string(n_c) +
                        " columns, got " + std::to_string(fields));
    }
    ++n_v;
  }
  if (n_v == 0) io_fail(path, "no points");
  if (offsets.back() != n_v) offsets.push_back(n_v);
  try {
    return PointCloud(std::move(coords), n_c, RowSplits::validate(std::move(offsets), n_v));
  } catch (const Error& e) {
    io_fail(path, e.what());
  }
}

PointCloud load_points(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_points_csv(path);
  return read_points(path);
}

void write_neighbors(const std::filesystem::path& path, const NeighborMatrix& nm) {
  Writer w;
  w.magic("FGN1");
  w.put<std::uint32_t>(to_u32(static_cast<std::size_t>(nm.n_v), path));
  w.put<std::uint32_t>(to_u32(static_cast<std::size_t>(nm.k), path));
  for (Index i : nm.indices) w.put<std::int32_t>(i);
  for (double d : nm.dist2) w.put<float>(static_cast<float>(d));
  write_file(path, w.bytes());
}

NeighborMatrix read_neighbors(const std::filesystem::path& path) {
  Reader in(path, read_file(path));
  in.expect_magic("FGN1");
  const auto n_v = in.get<std::uint32_t>();
  const auto k = in.get<std::uint32_t>();
  if (k == 0) io_fail(path, "K must be >= 1");
  NeighborMatrix nm(static_cast<Index>(n_v), static_cast<int>(k));
  for (Index& i : nm.indices) i = in.get<std::int32_t>();
  for (double& d : nm.dist2) d = in.get<float>();
  in.expect_end();
  return nm;
}

void write_associations(const std::filesystem::path& path, const Associations& assoc) {
  Writer w;
  w.magic("FGA1");
  w.put<std::uint32_t>(to_u32(assoc.asso_idx.size(), path));
  w.put<std::uint32_t>(to_u32(assoc.rs.num_splits(), path));
  for (Index off : assoc.rs.offsets()) w.put<std::int64_t>(off);
  for (Index a : assoc.asso_idx) w.put<std::int32_t>(a);
  write_file(path, w.bytes());
}

Associations read_associations(const std::filesystem::path& path) {
  Reader in(path, read_file(path));
  in.expect_magic("FGA1");
  const auto n_v = in.get<std::uint32_t>();
  const auto n_splits = in.get<std::uint32_t>();
  if (n_splits == 0) io_fail(path, "association file needs n_splits >= 1");
  RowSplits rs = read_offsets(in, n_splits, n_v, path);
  std::vector<Index> asso(n_v);
  for (Index& a : asso) a = in.get<std::int32_t>();
  in.expect_end();
  return Associations(std::move(asso), std::move(rs));
}

void write_association_matrices(const std::filesystem::path& path, const UniqueObjects& uniq,
                                const AssociationMatrices& mats) {
  Writer w;
  w.magic("FGM1");
  w.put<std::uint32_t>(to_u32(static_cast<std::size_t>(mats.n_unique), path));
  w.put<std::uint32_t>(to_u32(static_cast<std::size_t>(mats.n_maxuq), path));
  w.put<std::uint32_t>(to_u32(static_cast<std::size_t>(mats.n_maxrs), path));
  w.put<std::uint32_t>(mats.m_not ? 1U : 0U);
  for (Index id : uniq.unique_idx) w.put<std::int32_t>(id);
  for (Index s : uniq.unique_rs_asso) w.put<std::int32_t>(s);
  for (Index i : mats.m) w.put<std::int32_t>(i);
  if (mats.m_not) {
    for (Index i : *mats.m_not) w.put<std::int32_t>(i);
  }
  write_file(path, w.bytes());
}

}  // namespace fastgraph::harness
