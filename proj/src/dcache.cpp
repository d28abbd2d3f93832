#include "qds/dcache.hpp"

#include "qds/kriging.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qds {

namespace {
constexpr char kMagic[8] = {'Q', 'D', 'S', 'D', 'C', '0', '1', '\n'};
}

std::filesystem::path distance_cache_path(const std::filesystem::path& dir,
                                          std::uint64_t data_hash, DistanceKind kind) {
  char name[64];
  std::snprintf(name, sizeof(name), "dist_%016llx_%c.bin",
                static_cast<unsigned long long>(data_hash),
                kind == DistanceKind::genotypic_manhattan ? 'g' : 'p');
  return dir / name;
}

void save_distance_matrix(const std::filesystem::path& path, std::uint64_t data_hash,
                          DistanceKind kind, const Eigen::MatrixXd& distances) {
  if (distances.rows() != distances.cols())
    throw std::invalid_argument("distance cache: matrix must be square");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  const std::uint8_t kind_byte = kind == DistanceKind::genotypic_manhattan ? 0 : 1;
  const std::uint64_t n = static_cast<std::uint64_t>(distances.rows());
  out.write(reinterpret_cast<const char*>(&kind_byte), sizeof(kind_byte));
  out.write(reinterpret_cast<const char*>(&data_hash), sizeof(data_hash));
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(distances.data()),
            static_cast<std::streamsize>(sizeof(double) * distances.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::optional<Eigen::MatrixXd> load_distance_matrix(const std::filesystem::path& path,
                                                    std::uint64_t data_hash,
                                                    DistanceKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof(kMagic)];
  std::uint8_t kind_byte = 0;
  std::uint64_t stored_hash = 0;
  std::uint64_t n = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&kind_byte), sizeof(kind_byte));
  in.read(reinterpret_cast<char*>(&stored_hash), sizeof(stored_hash));
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) return std::nullopt;
  if (stored_hash != data_hash) return std::nullopt;
  if (kind_byte != (kind == DistanceKind::genotypic_manhattan ? 0 : 1))
    return std::nullopt;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!in) return std::nullopt;
  return m;
}

Eigen::MatrixXd cached_distance_matrix(const Eigen::MatrixXd& x, DistanceKind kind,
                                       const std::filesystem::path& cache_dir) {
  if (cache_dir.empty()) return manhattan_distance_matrix(x);
  const std::uint64_t hash = matrix_hash(x);
  const auto path = distance_cache_path(cache_dir, hash, kind);
  if (auto cached = load_distance_matrix(path, hash, kind)) return *cached;
  Eigen::MatrixXd distances = manhattan_distance_matrix(x);
  std::filesystem::create_directories(cache_dir);
  save_distance_matrix(path, hash, kind, distances);
  return distances;
}

}  // namespace qds
