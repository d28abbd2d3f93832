#pragma once
// MAP-Elites over the maze: the behavior descriptor is the episode end
// position, discretized by a fixed grid over the maze bounds; each cell
// keeps the controller that reached it with the shortest path. The batch
// rollout kernel has an OpenMP-parallel and a serial implementation with
// bit-identical results; archive commits are serialized in child order so
// runs are deterministic under a fixed seed.

#include "qds/controller.hpp"
#include "qds/dataset.hpp"
#include "qds/maze.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace qds {

struct QdConfig {
  int generations = 2000;
  int batch_size = 16;
  double mutation_rate = 0.05;
  double mutation_sigma = 0.2;
  int initial_random = 200;
  int grid_rows = 20;
  int grid_cols = 20;
  std::uint64_t seed = 0;
};

struct Elite {
  Genome genome;
  double fitness = 0.0;  // rollout path length; lower is better in a cell
  Vec2 end_position;
};

class NicheGrid {
 public:
  NicheGrid(int rows, int cols, Box bounds);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int cell_count() const { return rows_ * cols_; }
  const Box& bounds() const { return bounds_; }

  int cell_of(Vec2 position) const;

  // Strict-improvement rule: stores the elite iff the cell is empty or the
  // candidate fitness is strictly smaller. Returns true when stored.
  bool try_insert(int cell, Elite elite);

  const std::optional<Elite>& at(int cell) const { return cells_[static_cast<std::size_t>(cell)]; }
  std::vector<int> filled_cells() const;  // ascending cell index
  int filled_count() const;

 private:
  int rows_;
  int cols_;
  Box bounds_;
  std::vector<std::optional<Elite>> cells_;
};

struct InsertEvent {
  int generation = -1;  // -1 for the seeding phase
  int cell = 0;
  double previous_fitness = 0.0;  // NaN when the cell was empty
  double fitness = 0.0;
};

struct MapElitesTrace {
  std::vector<InsertEvent> inserts;
  int evaluations = 0;
};

std::vector<RolloutResult> rollout_batch(const MazeMap& map, const NetTopology& topology,
                                         std::span<const Genome> genomes, int max_steps);
std::vector<RolloutResult> rollout_batch_serial(const MazeMap& map,
                                                const NetTopology& topology,
                                                std::span<const Genome> genomes,
                                                int max_steps);

// Seeds the grid with config.initial_random random genomes, then runs
// config.generations batches of mutate -> rollout -> commit. Throws
// std::runtime_error when seeding leaves the archive empty.
NicheGrid run_map_elites(const MazeMap& map, const NetTopology& topology,
                         const QdConfig& config, MapElitesTrace* trace = nullptr,
                         bool parallel_rollouts = true);

// One dataset row per elite (row-major cell order): the weight vector, one
// behavior vector per probe, and the fitness. Subsets share row order.
Dataset archive_to_dataset(const NicheGrid& grid, const NetTopology& topology,
                           const std::vector<ProbeSequence>& probes);

nlohmann::json archive_to_json(const NicheGrid& grid, const MazeConfig& maze,
                               const NetTopology& topology, const QdConfig& config);
NicheGrid archive_from_json(const nlohmann::json& j);
void write_archive(const std::filesystem::path& path, const nlohmann::json& archive);
nlohmann::json read_archive(const std::filesystem::path& path);

// Order-insensitive content digest for determinism checks.
std::uint64_t archive_hash(const NicheGrid& grid);

}  // namespace qds
