#pragma once
// Binary cache for pairwise distance matrices, keyed by the feature-matrix
// hash and the distance kind. Little-endian doubles; the key is verified on
// load so a stale file can never be silently reused.

#include "qds/distance.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>

namespace qds {

std::filesystem::path distance_cache_path(const std::filesystem::path& dir,
                                          std::uint64_t data_hash, DistanceKind kind);

void save_distance_matrix(const std::filesystem::path& path, std::uint64_t data_hash,
                          DistanceKind kind, const Eigen::MatrixXd& distances);

// Empty when the file is absent or its key does not match.
std::optional<Eigen::MatrixXd> load_distance_matrix(const std::filesystem::path& path,
                                                    std::uint64_t data_hash,
                                                    DistanceKind kind);

// Cached wrapper around manhattan_distance_matrix; cache_dir may be empty
// to disable caching.
Eigen::MatrixXd cached_distance_matrix(const Eigen::MatrixXd& x, DistanceKind kind,
                                       const std::filesystem::path& cache_dir);

}  // namespace qds
