// Times the OpenMP kernels against their serial reference implementations
// and verifies that both produce identical results: episode rollout batches,
// pairwise distance matrices, and the forward-selection candidate scan.

#include "qds/archive.hpp"
#include "qds/distance.hpp"
#include "qds/linear.hpp"
#include "qds/rng.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_ms(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-24s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n");
#endif

  // Rollout batch.
  {
    const qds::MazeMap map = qds::build_maze({});
    const qds::NetTopology topology{qds::kSensorInputs, 5, 2};
    qds::Rng rng(7);
    std::vector<qds::Genome> genomes;
    for (int i = 0; i < 64; ++i) genomes.push_back(qds::random_genome(topology, rng));

    std::vector<qds::RolloutResult> serial, parallel;
    const double serial_ms = time_ms([&] {
      serial = qds::rollout_batch_serial(map, topology, genomes, map.config.max_steps);
    });
    const double parallel_ms = time_ms([&] {
      parallel = qds::rollout_batch(map, topology, genomes, map.config.max_steps);
    });
    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i)
      identical = serial[i].path_length == parallel[i].path_length &&
                  serial[i].end_position == parallel[i].end_position;
    report("rollout batch (64)", serial_ms, parallel_ms, identical);
  }

  // Pairwise distance matrix.
  {
    qds::Rng rng(11);
    Eigen::MatrixXd x(400, 512);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.uniform(-1.0, 1.0);

    Eigen::MatrixXd serial, parallel;
    const double serial_ms =
        time_ms([&] { serial = qds::manhattan_distance_matrix_serial(x); });
    const double parallel_ms =
        time_ms([&] { parallel = qds::manhattan_distance_matrix(x); });
    report("distances (400x512)", serial_ms, parallel_ms, serial == parallel);
  }

  // AIC forward-selection candidate scan.
  {
    qds::Rng rng(13);
    const Eigen::Index n = 200, p = 256;
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.uniform(-1.0, 1.0);
    Eigen::VectorXd y = x.col(3) * 2.0 - x.col(17) + x.col(42) * 0.5;
    for (Eigen::Index i = 0; i < n; ++i) y[i] += 0.05 * rng.gaussian();

    qds::LinearModel serial, parallel;
    const double serial_ms = time_ms([&] { serial = qds::fit_linear_aic(x, y, -1, false); });
    const double parallel_ms = time_ms([&] { parallel = qds::fit_linear_aic(x, y, -1, true); });
    const bool identical = serial.selected == parallel.selected &&
                           serial.coefficients == parallel.coefficients;
    report("aic scan (200x256)", serial_ms, parallel_ms, identical);
  }

  return 0;
}
