#pragma once

#include <cstdint>
#include <string_view>

#include "fastgraph/core.hpp"
#include "fastgraph/ocgraph.hpp"

namespace fastgraph::harness {

enum class Distribution { Uniform, Clusters };

bool parse_distribution(std::string_view text, Distribution& out) noexcept;
std::string_view distribution_name(Distribution d) noexcept;

/// Even partition: offsets[i] = floor(i * n / splits).
RowSplits even_row_splits(Index n, int splits);

/// Reproducible synthetic cloud. Uniform draws on [0,1)^d; Clusters draws
/// Gaussian blobs (sigma 0.03) around uniform centres, 16 per split.
/// Throws BadShape unless n >= splits >= 1 and d >= 1.
PointCloud generate_dataset(Index n, int d, int splits, std::uint64_t seed,
                            Distribution distribution = Distribution::Uniform);

/// Random object ids in [0, n_objects) per vertex; a `noise_fraction` share
/// of vertices gets -1.
Associations generate_associations(const RowSplits& rs, int n_objects, double noise_fraction,
                                   std::uint64_t seed);

}  // namespace fastgraph::harness
