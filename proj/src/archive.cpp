#include "qds/archive.hpp"

#include "qds/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace qds {

NicheGrid::NicheGrid(int rows, int cols, Box bounds)
    : rows_(rows), cols_(cols), bounds_(bounds),
      cells_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid: need >= 1 row and column");
  if (!(bounds.xmax > bounds.xmin) || !(bounds.ymax > bounds.ymin))
    throw std::invalid_argument("grid: empty bounds");
}

int NicheGrid::cell_of(Vec2 position) const {
  const double fx = (position.x - bounds_.xmin) / bounds_.width();
  const double fy = (position.y - bounds_.ymin) / bounds_.height();
  const int col = std::clamp(static_cast<int>(fx * cols_), 0, cols_ - 1);
  const int row = std::clamp(static_cast<int>(fy * rows_), 0, rows_ - 1);
  return row * cols_ + col;
}

bool NicheGrid::try_insert(int cell, Elite elite) {
  auto& slot = cells_[static_cast<std::size_t>(cell)];
  if (slot.has_value() && slot->fitness <= elite.fitness) return false;
  slot = std::move(elite);
  return true;
}

std::vector<int> NicheGrid::filled_cells() const {
  std::vector<int> filled;
  for (int i = 0; i < cell_count(); ++i)
    if (cells_[static_cast<std::size_t>(i)].has_value()) filled.push_back(i);
  return filled;
}

int NicheGrid::filled_count() const {
  return static_cast<int>(filled_cells().size());
}

std::vector<RolloutResult> rollout_batch_serial(const MazeMap& map,
                                                const NetTopology& topology,
                                                std::span<const Genome> genomes,
                                                int max_steps) {
  std::vector<RolloutResult> results(genomes.size());
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    Controller controller(genomes[i], topology);
    results[i] = rollout(map, controller, max_steps);
  }
  return results;
}

std::vector<RolloutResult> rollout_batch(const MazeMap& map, const NetTopology& topology,
                                         std::span<const Genome> genomes, int max_steps) {
  std::vector<RolloutResult> results(genomes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    Controller controller(genomes[i], topology);
    results[i] = rollout(map, controller, max_steps);
  }
  return results;
}

namespace {

void commit(NicheGrid& grid, std::span<const Genome> genomes,
            std::span<const RolloutResult> results, int generation,
            MapElitesTrace* trace) {
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    const int cell = grid.cell_of(results[i].end_position);
    const auto& occupant = grid.at(cell);
    const double previous = occupant.has_value()
                                ? occupant->fitness
                                : std::numeric_limits<double>::quiet_NaN();
    if (grid.try_insert(cell, {genomes[i], results[i].path_length,
                               results[i].end_position}) &&
        trace != nullptr)
      trace->inserts.push_back({generation, cell, previous, results[i].path_length});
  }
  if (trace != nullptr) trace->evaluations += static_cast<int>(genomes.size());
}

}  // namespace

NicheGrid run_map_elites(const MazeMap& map, const NetTopology& topology,
                         const QdConfig& config, MapElitesTrace* trace,
                         bool parallel_rollouts) {
  if (config.generations < 0) throw std::invalid_argument("qd: negative generations");
  if (config.batch_size < 1) throw std::invalid_argument("qd: batch size must be >= 1");
  if (config.initial_random < 1)
    throw std::invalid_argument("qd: need at least one random seed genome");
  if (config.mutation_rate < 0.0 || config.mutation_rate > 1.0)
    throw std::invalid_argument("qd: mutation rate outside [0,1]");

  Rng init_rng(derive_seed(config.seed, 0, "qd-init"));
  Rng select_rng(derive_seed(config.seed, 0, "qd-select"));
  Rng mutate_rng(derive_seed(config.seed, 0, "mutate"));

  NicheGrid grid(config.grid_rows, config.grid_cols, map.bounds);
  auto evaluate = parallel_rollouts ? rollout_batch : rollout_batch_serial;

  std::vector<Genome> seeds;
  seeds.reserve(static_cast<std::size_t>(config.initial_random));
  for (int i = 0; i < config.initial_random; ++i)
    seeds.push_back(random_genome(topology, init_rng));
  commit(grid, seeds, evaluate(map, topology, seeds, map.config.max_steps), -1, trace);
  if (grid.filled_count() == 0)
    throw std::runtime_error("qd: seeding filled no cells (degenerate maze or config)");

  std::vector<Genome> children(static_cast<std::size_t>(config.batch_size));
  for (int generation = 0; generation < config.generations; ++generation) {
    const std::vector<int> filled = grid.filled_cells();
    for (int i = 0; i < config.batch_size; ++i) {
      const int pick = filled[static_cast<std::size_t>(
          select_rng.uniform_int(static_cast<int>(filled.size())))];
      const Elite& parent = *grid.at(pick);
      children[static_cast<std::size_t>(i)] =
          mutate(parent.genome, config.mutation_rate, config.mutation_sigma, mutate_rng);
    }
    commit(grid, children, evaluate(map, topology, children, map.config.max_steps),
           generation, trace);
  }
  return grid;
}

Dataset archive_to_dataset(const NicheGrid& grid, const NetTopology& topology,
                           const std::vector<ProbeSequence>& probes) {
  const std::vector<int> filled = grid.filled_cells();
  if (filled.empty()) throw std::invalid_argument("dataset: empty archive");

  Dataset dataset;
  const auto n = static_cast<Eigen::Index>(filled.size());

  Eigen::MatrixXd weights(n, topology.weight_count());
  dataset.y.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Elite& elite = *grid.at(filled[static_cast<std::size_t>(r)]);
    for (int w = 0; w < topology.weight_count(); ++w)
      weights(r, w) = elite.genome.weights[static_cast<std::size_t>(w)];
    dataset.y[r] = elite.fitness;
  }
  dataset.subset_names.push_back("weights");
  dataset.subsets["weights"] = std::move(weights);

  for (const auto& probe : probes) {
    const int dim = probe.k() * topology.n_outputs;
    const std::string name = "pheno_" + std::to_string(dim);
    Eigen::MatrixXd pheno(n, dim);
    for (Eigen::Index r = 0; r < n; ++r) {
      const Elite& elite = *grid.at(filled[static_cast<std::size_t>(r)]);
      const auto values = sample_phenotype(elite.genome, topology, probe);
      for (int c = 0; c < dim; ++c) pheno(r, c) = values[static_cast<std::size_t>(c)];
    }
    dataset.subset_names.push_back(name);
    dataset.subsets[name] = std::move(pheno);
  }

  dataset.subset_names = canonical_subset_order(dataset.subset_names);
  dataset.meta = {{"schema", "qds.meta.v1"},
                  {"rows", n},
                  {"subsets", dataset.subset_names},
                  {"topology",
                   {{"n_inputs", topology.n_inputs},
                    {"n_hidden", topology.n_hidden},
                    {"n_outputs", topology.n_outputs}}}};
  return dataset;
}

static nlohmann::json maze_config_to_json(const MazeConfig& c) {
  return {{"rings", c.rings},
          {"radii", c.radii},
          {"openingWidthDeg", c.opening_width_deg},
          {"openingAngles", c.opening_angles_deg},
          {"boundsSize", c.bounds_size},
          {"robotRadius", c.robot_radius},
          {"sensorRange", c.sensor_range},
          {"turnGain", c.turn_gain},
          {"speedGain", c.speed_gain},
          {"maxSteps", c.max_steps}};
}

nlohmann::json archive_to_json(const NicheGrid& grid, const MazeConfig& maze,
                               const NetTopology& topology, const QdConfig& config) {
  nlohmann::json cells = nlohmann::json::array();
  for (const int cell : grid.filled_cells()) {
    const Elite& elite = *grid.at(cell);
    cells.push_back({{"cell", cell},
                     {"row", cell / grid.cols()},
                     {"col", cell % grid.cols()},
                     {"fitness", elite.fitness},
                     {"end", {elite.end_position.x, elite.end_position.y}},
                     {"weights", elite.genome.weights}});
  }
  return {{"schema", "qds.archive.v1"},
          {"seed", config.seed},
          {"rows", grid.rows()},
          {"cols", grid.cols()},
          {"bounds",
           {grid.bounds().xmin, grid.bounds().ymin, grid.bounds().xmax,
            grid.bounds().ymax}},
          {"maze", maze_config_to_json(maze)},
          {"qd",
           {{"generations", config.generations},
            {"batchSize", config.batch_size},
            {"mutationRate", config.mutation_rate},
            {"mutationSigma", config.mutation_sigma},
            {"initialRandom", config.initial_random},
            {"gridRows", config.grid_rows},
            {"gridCols", config.grid_cols}}},
          {"topology",
           {{"n_inputs", topology.n_inputs},
            {"n_hidden", topology.n_hidden},
            {"n_outputs", topology.n_outputs}}},
          {"cells", cells}};
}

NicheGrid archive_from_json(const nlohmann::json& j) {
  if (j.at("schema").get<std::string>() != "qds.archive.v1")
    throw std::runtime_error("archive: unknown schema");
  const auto bounds = j.at("bounds").get<std::vector<double>>();
  NicheGrid grid(j.at("rows").get<int>(), j.at("cols").get<int>(),
                 Box{bounds.at(0), bounds.at(1), bounds.at(2), bounds.at(3)});
  for (const auto& cell : j.at("cells")) {
    Elite elite;
    elite.genome.weights = cell.at("weights").get<std::vector<double>>();
    elite.fitness = cell.at("fitness").get<double>();
    elite.end_position = {cell.at("end").at(0).get<double>(),
                          cell.at("end").at(1).get<double>()};
    grid.try_insert(cell.at("cell").get<int>(), std::move(elite));
  }
  return grid;
}

void write_archive(const std::filesystem::path& path, const nlohmann::json& archive) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << archive.dump(2) << '\n';
}

nlohmann::json read_archive(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing file: " + path.string());
  return nlohmann::json::parse(in);
}

std::uint64_t archive_hash(const NicheGrid& grid) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const int cell : grid.filled_cells()) {
    const Elite& elite = *grid.at(cell);
    h = fnv1a64_bytes(&cell, sizeof(cell), h);
    const std::string fitness = csv::format_double(elite.fitness);
    h = fnv1a64_bytes(fitness.data(), fitness.size(), h);
    for (const double w : elite.genome.weights) {
      const std::string cellw = csv::format_double(w);
      h = fnv1a64_bytes(cellw.data(), cellw.size(), h);
    }
  }
  return h;
}

}  // namespace qds
