#pragma once
// Experiment configuration: maze, controller topology, archive search,
// probe sizes, replication layout, and modeling settings, loadable from a
// single JSON document. Defaults describe the canonical desk-scale
// experiment; everything is overridable.

#include "qds/archive.hpp"
#include "qds/kriging.hpp"
#include "qds/maze.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qds {

struct ExperimentConfig {
  MazeConfig maze;
  std::vector<int> hidden_sizes = {2, 5};
  int n_outputs = 2;
  QdConfig qd;
  std::vector<int> probe_sizes = {2, 4, 8, 16, 32, 64, 128, 256};  // k values
  std::string probe_mode = "uniform";  // or "trajectory"
  int replications = 5;
  std::uint64_t base_seed = 1;
  int train_size = 200;
  std::vector<std::string> models = {"kriging", "linear"};
  KrigingOptions kriging;
  int linear_max_steps = -1;
  int bootstrap_resamples = 1000;

  NetTopology topology(int n_hidden) const {
    return {kSensorInputs, n_hidden, n_outputs};
  }
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

// All violated preconditions, one message each; empty means valid.
std::vector<std::string> validate(const ExperimentConfig& config);

// Directory name for one run: rep003_h5.
std::string replication_dir_name(int replication, int n_hidden);

// Named RNG stream for one run; the hidden-layer size is folded into the
// stream name so runs differing only in topology do not share draws.
std::uint64_t run_stream_seed(const ExperimentConfig& config, int replication,
                              int n_hidden, const std::string& stream);

}  // namespace qds
