// Command-line front end: generate datasets, re-sample phenotypes, fit
// single models, evaluate all models, run the PCA analysis, and aggregate
// reports. Exit codes: 0 success, 1 validation failure, 2 runtime failure.

#include "qds/commands.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

qds::ExperimentConfig resolve_config(const std::string& config_path,
                                     const std::optional<std::uint64_t>& seed,
                                     const std::optional<int>& replications,
                                     const std::optional<int>& train_size) {
  qds::ExperimentConfig config;
  if (!config_path.empty()) config = qds::load_config(config_path);
  if (seed) config.base_seed = *seed;
  if (replications) config.replications = *replications;
  if (train_size) config.train_size = *train_size;
  return config;
}

void apply_jobs(const std::optional<int>& jobs) {
#ifdef _OPENMP
  if (jobs && *jobs > 0) omp_set_num_threads(*jobs);
#else
  (void)jobs;
#endif
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quality-diversity maze datasets and similarity-based fitness models"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::optional<int> train_size;
  std::optional<int> jobs;
  app.add_option("--config", config_path, "JSON experiment config")->capture_default_str();
  app.add_option("--seed", seed, "override the base seed");
  app.add_option("--replications", replications, "override the replication count");
  app.add_option("--train-size", train_size, "override the training split size");
  app.add_option("--jobs", jobs, "worker thread count");

  auto* generate = app.add_subcommand("generate", "run the archive search and write datasets");
  std::string out_dir = "runs/out";
  generate->add_option("--out", out_dir, "output directory")->capture_default_str();

  auto* phenotype =
      app.add_subcommand("phenotype", "re-sample phenotype subsets for a dataset");
  std::string dataset_dir;
  std::vector<int> probe_sizes;
  phenotype->add_option("--dataset", dataset_dir, "dataset directory")->required();
  phenotype->add_option("--k", probe_sizes, "probe sizes (k values)")->required();

  auto* fit = app.add_subcommand("fit", "fit one model and print its Kendall tau");
  std::string fit_dataset, fit_subset = "weights", fit_model = "kriging", model_out;
  fit->add_option("--dataset", fit_dataset, "dataset directory")->required();
  fit->add_option("--subset", fit_subset, "feature subset name")->capture_default_str();
  fit->add_option("--model", fit_model, "kriging|linear")->capture_default_str();
  fit->add_option("--out", model_out, "write the fitted model JSON here");

  auto* evaluate = app.add_subcommand("evaluate", "fit and score all models per replication");
  std::string eval_dataset_root, eval_out = "results", eval_subset, eval_model, cache_dir;
  evaluate->add_option("--dataset", eval_dataset_root, "dataset root directory")->required();
  evaluate->add_option("--out", eval_out, "results directory")->capture_default_str();
  evaluate->add_option("--subset", eval_subset, "only this subset");
  evaluate->add_option("--model", eval_model, "only this model kind");
  evaluate->add_option("--cache-dir", cache_dir, "distance matrix cache directory");

  auto* analyze = app.add_subcommand("analyze", "PCA dimensionality of every subset");
  std::string analyze_dataset_root, analyze_out = "results";
  analyze->add_option("--dataset", analyze_dataset_root, "dataset root directory")->required();
  analyze->add_option("--out", analyze_out, "output directory")->capture_default_str();

  auto* report = app.add_subcommand("report", "aggregate results into summaries and plot data");
  std::string results_dir = "results";
  report->add_option("--results", results_dir, "results directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  apply_jobs(jobs);

  try {
    const qds::ExperimentConfig config =
        resolve_config(config_path, seed, replications, train_size);

    if (generate->parsed()) return qds::cmd_generate(config, out_dir);
    if (phenotype->parsed()) return qds::cmd_phenotype(dataset_dir, probe_sizes);
    if (fit->parsed()) {
      const std::uint64_t split_seed =
          qds::derive_seed(config.base_seed, 0, "fit/split");
      return qds::cmd_fit(fit_dataset, fit_subset, fit_model, config, split_seed,
                          model_out);
    }
    if (evaluate->parsed()) {
      qds::EvalFilter filter;
      if (!eval_subset.empty()) filter.subset = eval_subset;
      if (!eval_model.empty()) filter.model = eval_model;
      return qds::cmd_evaluate(eval_dataset_root, eval_out, config, filter, cache_dir);
    }
    if (analyze->parsed()) return qds::cmd_analyze(analyze_dataset_root, analyze_out);
    if (report->parsed()) return qds::cmd_report(results_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
