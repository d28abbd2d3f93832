#include "qds/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qds {

namespace {

void check_shapes(const Genome& genome, const NetTopology& topology,
                  std::size_t input_size) {
  if (!topology.valid()) throw std::invalid_argument("controller: invalid topology");
  if (static_cast<int>(genome.weights.size()) != topology.weight_count())
    throw std::invalid_argument(
        "controller: genome length " + std::to_string(genome.weights.size()) +
        " does not match topology weight count " +
        std::to_string(topology.weight_count()));
  if (static_cast<int>(input_size) != topology.n_inputs)
    throw std::invalid_argument("controller: input length " +
                                std::to_string(input_size) + " != n_inputs " +
                                std::to_string(topology.n_inputs));
}

void forward_impl(std::span<const double> weights, const NetTopology& topology,
                  std::span<const double> input, std::span<double> hidden,
                  std::span<double> output) {
  const int ni = topology.n_inputs;
  const int nh = topology.n_hidden;
  const int no = topology.n_outputs;
  std::size_t w = 0;
  for (int h = 0; h < nh; ++h) {
    double acc = 0.0;
    for (int i = 0; i < ni; ++i) acc += weights[w++] * input[static_cast<std::size_t>(i)];
    acc += weights[w++];  // bias
    hidden[static_cast<std::size_t>(h)] = std::tanh(acc);
  }
  for (int o = 0; o < no; ++o) {
    double acc = 0.0;
    for (int h = 0; h < nh; ++h) acc += weights[w++] * hidden[static_cast<std::size_t>(h)];
    acc += weights[w++];  // bias
    output[static_cast<std::size_t>(o)] = std::tanh(acc);
  }
}

}  // namespace

std::vector<double> forward(const Genome& genome, const NetTopology& topology,
                            std::span<const double> input) {
  check_shapes(genome, topology, input.size());
  std::vector<double> hidden(static_cast<std::size_t>(topology.n_hidden));
  std::vector<double> output(static_cast<std::size_t>(topology.n_outputs));
  forward_impl(genome.weights, topology, input, hidden, output);
  return output;
}

Controller::Controller(const Genome& genome, const NetTopology& topology)
    : genome_(&genome),
      topology_(topology),
      hidden_(static_cast<std::size_t>(topology.n_hidden)),
      output_(static_cast<std::size_t>(topology.n_outputs)) {
  check_shapes(genome, topology, static_cast<std::size_t>(topology.n_inputs));
}

void Controller::forward_into(std::span<const double> input, std::span<double> output) {
  forward_impl(genome_->weights, topology_, input, hidden_, output);
}

MotorCommand Controller::operator()(const SensorReading& reading) {
  const auto input = sensor_to_input(reading);
  forward_impl(genome_->weights, topology_, input, hidden_, output_);
  return {output_[0], output_[1]};
}

ProbeSequence draw_probe(const NetTopology& topology, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("probe: k must be >= 1");
  if (topology.n_inputs < 5)
    throw std::invalid_argument("probe: topology needs >= 5 inputs (ranges + beacon)");
  const int n_range = topology.n_inputs - 4;
  Rng rng(seed);
  ProbeSequence probe;
  probe.seed = seed;
  probe.inputs.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    std::vector<double> input(static_cast<std::size_t>(topology.n_inputs), 0.0);
    for (int r = 0; r < n_range; ++r) input[static_cast<std::size_t>(r)] = rng.uniform01();
    input[static_cast<std::size_t>(n_range + rng.uniform_int(4))] = 1.0;
    probe.inputs.push_back(std::move(input));
  }
  return probe;
}

ProbeSequence probe_prefix(const ProbeSequence& probe, int k) {
  if (k < 1 || k > probe.k())
    throw std::invalid_argument("probe prefix: k out of range");
  ProbeSequence prefix;
  prefix.seed = probe.seed;
  prefix.inputs.assign(probe.inputs.begin(), probe.inputs.begin() + k);
  return prefix;
}

ProbeSequence draw_probe_trajectory(const MazeMap& map, const NetTopology& topology,
                                    int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("probe: k must be >= 1");
  Rng rng(seed);
  ProbeSequence probe;
  probe.seed = seed;
  probe.inputs.reserve(static_cast<std::size_t>(k));
  while (static_cast<int>(probe.inputs.size()) < k) {
    const Genome genome = random_genome(topology, rng);
    Controller controller(genome, topology);
    RobotState state{map.start, 0.0, map.config.robot_radius};
    for (int i = 0; i < map.config.max_steps &&
                    static_cast<int>(probe.inputs.size()) < k;
         ++i) {
      const SensorReading reading = sense(map, state);
      const auto input = sensor_to_input(reading);
      probe.inputs.emplace_back(input.begin(), input.end());
      state = step(map, state, controller(reading));
    }
  }
  return probe;
}

std::vector<double> sample_phenotype(const Genome& genome, const NetTopology& topology,
                                     const ProbeSequence& probe) {
  if (probe.k() < 1) throw std::invalid_argument("phenotype: empty probe");
  for (const auto& input : probe.inputs)
    if (static_cast<int>(input.size()) != topology.n_inputs)
      throw std::invalid_argument("phenotype: probe input width != n_inputs");
  Controller controller(genome, topology);
  const auto z = static_cast<std::size_t>(topology.n_outputs);
  std::vector<double> phenotype(probe.inputs.size() * z);
  for (std::size_t i = 0; i < probe.inputs.size(); ++i)
    controller.forward_into(probe.inputs[i], std::span(phenotype).subspan(i * z, z));
  return phenotype;
}

Genome mutate(const Genome& genome, double rate, double sigma, Rng& rng) {
  if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("mutate: rate outside [0,1]");
  if (sigma <= 0.0) throw std::invalid_argument("mutate: sigma must be positive");
  Genome child = genome;
  for (double& w : child.weights) {
    if (rng.uniform01() < rate)
      w = std::clamp(w + sigma * rng.gaussian(), kWeightMin, kWeightMax);
  }
  return child;
}

Genome random_genome(const NetTopology& topology, Rng& rng) {
  Genome genome;
  genome.weights.resize(static_cast<std::size_t>(topology.weight_count()));
  for (double& w : genome.weights) w = rng.uniform(-1.0, 1.0);
  return genome;
}

}  // namespace qds
