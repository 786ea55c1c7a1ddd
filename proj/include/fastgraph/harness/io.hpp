#pragma once

// Binary file formats. All integers and floats are little-endian.
//
//   point file        "FGC1" u32 n_v, u32 n_c, u32 n_splits,
//                     i64 offsets[n_splits+1], f32 coords[n_v*n_c] (row-major)
//   neighbor file     "FGN1" u32 n_v, u32 K, i32 indices[n_v*K], f32 dist2[n_v*K]
//   association file  "FGA1" u32 n_v, u32 n_splits, i64 offsets[n_splits+1],
//                     i32 asso[n_v]
//   matrices file     "FGM1" u32 n_unique, u32 n_maxuq, u32 n_maxrs, u32 has_m_not,
//                     i32 unique_idx[n_unique], i32 unique_rs_asso[n_unique],
//                     i32 m[n_unique*n_maxuq], i32 m_not[n_unique*n_maxrs] (if present)
//
// Failures raise Error with ErrorCode::IoError.

#include <filesystem>
#include <string>

#include "fastgraph/core.hpp"
#include "fastgraph/ocgraph.hpp"

namespace fastgraph::harness {

/// Coordinates are narrowed to f32 on write.
void write_points(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud read_points(const std::filesystem::path& path);

/// Comma-separated coordinates, one point per line. Blank lines start a new
/// row split; lines beginning with '#' are comments.
PointCloud read_points_csv(const std::filesystem::path& path);

/// Reads either format, chosen by the ".csv" extension.
PointCloud load_points(const std::filesystem::path& path);

void write_neighbors(const std::filesystem::path& path, const NeighborMatrix& nm);
/// dist2 values come back as the stored f32 values.
NeighborMatrix read_neighbors(const std::filesystem::path& path);

void write_associations(const std::filesystem::path& path, const Associations& assoc);
Associations read_associations(const std::filesystem::path& path);

void write_association_matrices(const std::filesystem::path& path, const UniqueObjects& uniq,
                                const AssociationMatrices& mats);

/// Whole-file helpers, also used for text outputs.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace fastgraph::harness
