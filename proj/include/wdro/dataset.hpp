#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "wdro/space.hpp"

namespace wdro {

enum class DatasetSchema { labeled, unlabeled };

// CSV loader: one point per row, columns x_1..x_d[,y], decimal text. A header
// row is auto-detected by a non-numeric first field. Points are validated
// against the space bounds; weights are uniform 1/n. Failures carry the
// offending row number.
EmpiricalDistribution load_dataset(const std::filesystem::path& path, DatasetSchema schema,
                                   const InstanceSpace& space);

// Inverse of load_dataset for uniform-weight distributions: 17-significant-
// digit decimal text, so load(save(d)) reproduces coordinates bit-exactly.
// The format carries no weight column.
void save_dataset(const std::filesystem::path& path, const EmpiricalDistribution& dist,
                  DatasetSchema schema);

// n i.i.d. Unif[0,1] scalar points with uniform weights, reproducible from
// the seed.
EmpiricalDistribution sample_uniform_interval(std::size_t n, std::uint64_t seed);

} // namespace wdro
