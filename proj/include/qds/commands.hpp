#pragma once
// Implementations behind the CLI subcommands. Each returns a process exit
// code: 0 success, 1 validation failure, 2 runtime failure. Kept in the
// library so the pipeline is testable without spawning processes.

#include "qds/config.hpp"
#include "qds/evaluate.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qds {

// Runs the archive search for every (replication, hidden size) pair, samples
// behavior vectors for all probe sizes, and writes one dataset directory per
// run plus the resolved config at the output root.
int cmd_generate(const ExperimentConfig& config, const std::filesystem::path& out_dir);

// Re-samples behavior subsets for an existing dataset directory from its
// archived genomes, using the recorded probe seed and a new list of k values.
int cmd_phenotype(const std::filesystem::path& dataset_dir,
                  const std::vector<int>& probe_sizes);

// Fits one model on one subset of one dataset directory and prints the
// held-out Kendall tau; optionally saves the model as JSON.
int cmd_fit(const std::filesystem::path& dataset_dir, const std::string& subset,
            const std::string& model, const ExperimentConfig& config,
            std::uint64_t split_seed, const std::filesystem::path& model_out);

// Evaluates every replication directory found under dataset_root and writes
// results.csv, pca.csv and summary.json into out_dir.
int cmd_evaluate(const std::filesystem::path& dataset_root,
                 const std::filesystem::path& out_dir, const ExperimentConfig& config,
                 const EvalFilter& filter = {},
                 const std::filesystem::path& cache_dir = {});

// PCA-only pass over the datasets; writes pca.csv.
int cmd_analyze(const std::filesystem::path& dataset_root,
                const std::filesystem::path& out_dir);

// Aggregates results.csv/pca.csv from a results directory into summary
// tables and fig6/fig7/fig8 plot data. Idempotent.
int cmd_report(const std::filesystem::path& results_dir);

// Dataset directories (containing meta.json) directly under root, sorted.
std::vector<std::filesystem::path> find_replication_dirs(
    const std::filesystem::path& root);

}  // namespace qds
