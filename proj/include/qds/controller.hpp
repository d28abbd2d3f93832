#pragma once
// Fixed-topology feed-forward controller: a flat weight vector (genome),
// the forward pass, and behavior sampling against a shared probe input
// sequence. The sampled output vector is the phenotype; its length depends
// only on the probe length and the output width, never on the hidden layer,
// which is what makes behavior vectors comparable across topologies.
//
// Weight layout: hidden layer row-major (n_inputs weights then the bias,
// per hidden unit), followed by the output layer (n_hidden weights then the
// bias, per output unit). Activations are tanh on both layers, so outputs
// live in (-1, 1) and feed the wheels directly.

#include "qds/maze.hpp"
#include "qds/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qds {

inline constexpr double kWeightMin = -4.0;
inline constexpr double kWeightMax = 4.0;

struct NetTopology {
  int n_inputs = kSensorInputs;
  int n_hidden = 2;
  int n_outputs = 2;

  int weight_count() const {
    return (n_inputs + 1) * n_hidden + (n_hidden + 1) * n_outputs;
  }
  bool valid() const { return n_inputs >= 1 && n_hidden >= 1 && n_outputs >= 1; }
};

struct Genome {
  std::vector<double> weights;
};

// Throws std::invalid_argument when the genome or input length does not
// match the topology.
std::vector<double> forward(const Genome& genome, const NetTopology& topology,
                            std::span<const double> input);

// Rollout policy wrapper binding a genome to a topology; reuses scratch
// buffers across steps. Not safe to share between threads; make one per
// rollout.
class Controller {
 public:
  Controller(const Genome& genome, const NetTopology& topology);

  MotorCommand operator()(const SensorReading& reading);
  void forward_into(std::span<const double> input, std::span<double> output);

 private:
  const Genome* genome_;
  NetTopology topology_;
  std::vector<double> hidden_;
  std::vector<double> output_;
};

struct ProbeSequence {
  std::vector<std::vector<double>> inputs;  // k rows of n_inputs entries
  std::uint64_t seed = 0;

  int k() const { return static_cast<int>(inputs.size()); }
};

// Draws k sensor-shaped inputs: rangefinder entries uniform on [0, 1] and a
// uniformly chosen one-hot beacon quadrant. Fully determined by the seed.
ProbeSequence draw_probe(const NetTopology& topology, int k, std::uint64_t seed);

// First k inputs of a longer probe; lets one master draw serve every
// phenotype size so the sizes are nested.
ProbeSequence probe_prefix(const ProbeSequence& probe, int k);

// Alternative probe mode: harvest inputs actually sensed by randomly
// initialized controllers rolled out in the given maze.
ProbeSequence draw_probe_trajectory(const MazeMap& map, const NetTopology& topology,
                                    int k, std::uint64_t seed);

// Concatenated controller outputs over the probe inputs, length k * n_outputs.
std::vector<double> sample_phenotype(const Genome& genome, const NetTopology& topology,
                                     const ProbeSequence& probe);

// Each weight is perturbed with probability `rate` by Gaussian noise of the
// given sigma, then clamped to the weight bounds.
Genome mutate(const Genome& genome, double rate, double sigma, Rng& rng);

// Initial genomes are uniform on [-1, 1] per weight.
Genome random_genome(const NetTopology& topology, Rng& rng);

}  // namespace qds
