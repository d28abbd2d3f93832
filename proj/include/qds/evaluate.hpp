#pragma once
// Model evaluation over a dataset: split, fit each requested model on each
// feature subset, score Kendall tau on the held-out rows, and measure the
// PCA dimensionality of every subset. Aggregation turns the per-replication
// rows into medians, quartiles, and plot-ready JSON.

#include "qds/config.hpp"
#include "qds/dataset.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qds {

struct EvalResult {
  int replication = 0;
  int n_hidden = 0;
  std::string subset;
  int dim = 0;
  std::string model;  // "kriging" | "linear"
  double tau = 0.0;
  int n_coefficients = 0;  // linear only, 0 otherwise
  int train_size = 0;
  int test_size = 0;
  std::string status = "ok";  // or "error: ..."
};

struct PcaResult {
  int replication = 0;
  int n_hidden = 0;
  std::string subset;
  int dim = 0;
  int components90 = 0;
};

struct EvalFilter {
  std::optional<std::string> subset;
  std::optional<std::string> model;
};

// Fit/score every (subset, model) pair; a failing pair is recorded with an
// error status instead of aborting the rest.
std::vector<EvalResult> evaluate_models(const Dataset& dataset,
                                        const ExperimentConfig& config,
                                        int replication, int n_hidden,
                                        std::uint64_t split_seed,
                                        const EvalFilter& filter = {},
                                        const std::filesystem::path& cache_dir = {});

std::vector<PcaResult> pca_results(const Dataset& dataset, int replication,
                                   int n_hidden, const EvalFilter& filter = {});

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<EvalResult>& results);
std::vector<EvalResult> read_results_csv(const std::filesystem::path& path);
void write_pca_csv(const std::filesystem::path& path,
                   const std::vector<PcaResult>& results);
std::vector<PcaResult> read_pca_csv(const std::filesystem::path& path);

// Aggregates (medians/quartiles across replications) and writes
// summary_models.csv, summary_pca.csv, fig6.json, fig7.json, fig8.json.
void write_report(const std::filesystem::path& out_dir,
                  const std::vector<EvalResult>& results,
                  const std::vector<PcaResult>& pca);

}  // namespace qds
