#include "qds/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qds {

namespace {

// Accepts either one angle per ring or a list of angles per ring.
std::vector<std::vector<double>> parse_opening_angles(const nlohmann::json& j) {
  std::vector<std::vector<double>> out;
  for (const auto& entry : j) {
    if (entry.is_array())
      out.push_back(entry.get<std::vector<double>>());
    else
      out.push_back({entry.get<double>()});
  }
  return out;
}

template <typename T>
void maybe(const nlohmann::json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  if (j.contains("maze")) {
    const auto& m = j.at("maze");
    maybe(m, "rings", config.maze.rings);
    maybe(m, "radii", config.maze.radii);
    maybe(m, "openingWidthDeg", config.maze.opening_width_deg);
    if (m.contains("openingAngles"))
      config.maze.opening_angles_deg = parse_opening_angles(m.at("openingAngles"));
    maybe(m, "boundsSize", config.maze.bounds_size);
    maybe(m, "robotRadius", config.maze.robot_radius);
    maybe(m, "sensorRange", config.maze.sensor_range);
    maybe(m, "turnGain", config.maze.turn_gain);
    maybe(m, "speedGain", config.maze.speed_gain);
    maybe(m, "maxSteps", config.maze.max_steps);
  }
  if (j.contains("topology")) {
    const auto& t = j.at("topology");
    maybe(t, "nHidden", config.hidden_sizes);
    maybe(t, "nOutputs", config.n_outputs);
  }
  if (j.contains("qd")) {
    const auto& q = j.at("qd");
    maybe(q, "generations", config.qd.generations);
    maybe(q, "batchSize", config.qd.batch_size);
    maybe(q, "mutationRate", config.qd.mutation_rate);
    maybe(q, "mutationSigma", config.qd.mutation_sigma);
    maybe(q, "initialRandom", config.qd.initial_random);
    maybe(q, "gridRows", config.qd.grid_rows);
    maybe(q, "gridCols", config.qd.grid_cols);
  }
  maybe(j, "probeSizes", config.probe_sizes);
  maybe(j, "probeMode", config.probe_mode);
  maybe(j, "replications", config.replications);
  maybe(j, "baseSeed", config.base_seed);
  maybe(j, "trainSize", config.train_size);
  maybe(j, "models", config.models);
  if (j.contains("kriging")) {
    const auto& k = j.at("kriging");
    maybe(k, "mleBudget", config.kriging.mle_budget);
    maybe(k, "ftolRel", config.kriging.ftol_rel);
    maybe(k, "log10ThetaLo", config.kriging.log10_theta_lo);
    maybe(k, "log10ThetaHi", config.kriging.log10_theta_hi);
    maybe(k, "log10NuggetLo", config.kriging.log10_nugget_lo);
    maybe(k, "log10NuggetHi", config.kriging.log10_nugget_hi);
    maybe(k, "optimizeNugget", config.kriging.optimize_nugget);
    maybe(k, "fixedNugget", config.kriging.fixed_nugget);
    maybe(k, "useGridFallback", config.kriging.use_grid_fallback);
  }
  maybe(j, "linearMaxSteps", config.linear_max_steps);
  maybe(j, "bootstrapResamples", config.bootstrap_resamples);
  return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  return {{"maze",
           {{"rings", config.maze.rings},
            {"radii", config.maze.radii},
            {"openingWidthDeg", config.maze.opening_width_deg},
            {"openingAngles", config.maze.opening_angles_deg},
            {"boundsSize", config.maze.bounds_size},
            {"robotRadius", config.maze.robot_radius},
            {"sensorRange", config.maze.sensor_range},
            {"turnGain", config.maze.turn_gain},
            {"speedGain", config.maze.speed_gain},
            {"maxSteps", config.maze.max_steps}}},
          {"topology", {{"nHidden", config.hidden_sizes}, {"nOutputs", config.n_outputs}}},
          {"qd",
           {{"generations", config.qd.generations},
            {"batchSize", config.qd.batch_size},
            {"mutationRate", config.qd.mutation_rate},
            {"mutationSigma", config.qd.mutation_sigma},
            {"initialRandom", config.qd.initial_random},
            {"gridRows", config.qd.grid_rows},
            {"gridCols", config.qd.grid_cols}}},
          {"probeSizes", config.probe_sizes},
          {"probeMode", config.probe_mode},
          {"replications", config.replications},
          {"baseSeed", config.base_seed},
          {"trainSize", config.train_size},
          {"models", config.models},
          {"kriging",
           {{"mleBudget", config.kriging.mle_budget},
            {"ftolRel", config.kriging.ftol_rel},
            {"log10ThetaLo", config.kriging.log10_theta_lo},
            {"log10ThetaHi", config.kriging.log10_theta_hi},
            {"log10NuggetLo", config.kriging.log10_nugget_lo},
            {"log10NuggetHi", config.kriging.log10_nugget_hi},
            {"optimizeNugget", config.kriging.optimize_nugget},
            {"fixedNugget", config.kriging.fixed_nugget},
            {"useGridFallback", config.kriging.use_grid_fallback}}},
          {"linearMaxSteps", config.linear_max_steps},
          {"bootstrapResamples", config.bootstrap_resamples}};
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return config_from_json(nlohmann::json::parse(in));
}

std::vector<std::string> validate(const ExperimentConfig& config) {
  std::vector<std::string> issues;
  try {
    build_maze(config.maze);
  } catch (const std::exception& e) {
    issues.emplace_back(e.what());
  }
  if (config.hidden_sizes.empty()) issues.emplace_back("topology: no hidden sizes");
  for (const int h : config.hidden_sizes)
    if (h < 1) issues.emplace_back("topology: hidden size must be >= 1");
  if (config.n_outputs < 1) issues.emplace_back("topology: outputs must be >= 1");
  if (config.qd.generations < 1) issues.emplace_back("qd: generations must be >= 1");
  if (config.qd.batch_size < 1) issues.emplace_back("qd: batch size must be >= 1");
  if (config.qd.mutation_rate < 0.0 || config.qd.mutation_rate > 1.0)
    issues.emplace_back("qd: mutation rate outside [0,1]");
  if (config.qd.mutation_sigma <= 0.0) issues.emplace_back("qd: sigma must be positive");
  if (config.qd.initial_random < 1)
    issues.emplace_back("qd: initial random population must be >= 1");
  if (config.qd.grid_rows < 1 || config.qd.grid_cols < 1)
    issues.emplace_back("qd: grid must be at least 1x1");
  if (config.probe_sizes.empty()) issues.emplace_back("probe: no probe sizes");
  for (const int k : config.probe_sizes)
    if (k < 1) issues.emplace_back("probe: k must be >= 1");
  if (config.probe_mode != "uniform" && config.probe_mode != "trajectory")
    issues.emplace_back("probe: mode must be uniform or trajectory");
  if (config.replications < 1) issues.emplace_back("replications must be >= 1");
  if (config.train_size < 2) issues.emplace_back("train size must be >= 2");
  if (config.models.empty()) issues.emplace_back("models: none selected");
  for (const auto& m : config.models)
    if (m != "kriging" && m != "linear") issues.emplace_back("models: unknown kind " + m);
  if (config.kriging.mle_budget < 1) issues.emplace_back("kriging: budget must be >= 1");
  if (config.bootstrap_resamples < 1)
    issues.emplace_back("bootstrap resamples must be >= 1");
  return issues;
}

std::string replication_dir_name(int replication, int n_hidden) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "rep%03d_h%d", replication, n_hidden);
  return buf;
}

std::uint64_t run_stream_seed(const ExperimentConfig& config, int replication,
                              int n_hidden, const std::string& stream) {
  return derive_seed(config.base_seed, static_cast<std::uint64_t>(replication),
                     "h" + std::to_string(n_hidden) + "/" + stream);
}

}  // namespace qds
