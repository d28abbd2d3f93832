#include "qds/commands.hpp"

#include "qds/csv.hpp"
#include "qds/kriging.hpp"
#include "qds/linear.hpp"
#include "qds/stats.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

namespace qds {

namespace {

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << doc.dump(2) << '\n';
}

int print_validation_issues(const std::vector<std::string>& issues) {
  std::cerr << "configuration invalid:\n";
  for (const auto& issue : issues) std::cerr << "  - " << issue << '\n';
  return 1;
}

ProbeSequence master_probe(const ExperimentConfig& config, const MazeMap& map,
                           const NetTopology& topology, std::uint64_t seed) {
  const int k_max = *std::max_element(config.probe_sizes.begin(), config.probe_sizes.end());
  if (config.probe_mode == "trajectory")
    return draw_probe_trajectory(map, topology, k_max, seed);
  return draw_probe(topology, k_max, seed);
}

std::vector<ProbeSequence> probe_prefixes(const ProbeSequence& master,
                                          std::vector<int> sizes) {
  std::sort(sizes.begin(), sizes.end());
  std::vector<ProbeSequence> probes;
  probes.reserve(sizes.size());
  for (const int k : sizes) probes.push_back(probe_prefix(master, k));
  return probes;
}

}  // namespace

std::vector<std::filesystem::path> find_replication_dirs(
    const std::filesystem::path& root) {
  std::vector<std::filesystem::path> dirs;
  if (std::filesystem::exists(root / "meta.json")) {
    dirs.push_back(root);
    return dirs;
  }
  if (!std::filesystem::is_directory(root)) return dirs;
  for (const auto& entry : std::filesystem::directory_iterator(root))
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "meta.json"))
      dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

int cmd_generate(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  const auto issues = validate(config);
  if (!issues.empty()) return print_validation_issues(issues);

  std::filesystem::create_directories(out_dir);
  write_json_file(out_dir / "config.json", config_to_json(config));

  const MazeMap map = build_maze(config.maze);
  const std::vector<bool> reachable =
      reachable_cells(map, config.qd.grid_rows, config.qd.grid_cols);
  const int reachable_count =
      static_cast<int>(std::count(reachable.begin(), reachable.end(), true));

  for (int rep = 0; rep < config.replications; ++rep) {
    for (const int n_hidden : config.hidden_sizes) {
      const NetTopology topology = config.topology(n_hidden);
      QdConfig qd = config.qd;
      qd.seed = run_stream_seed(config, rep, n_hidden, "qd");

      const NicheGrid grid = run_map_elites(map, topology, qd);

      const std::uint64_t probe_seed = run_stream_seed(config, rep, n_hidden, "probe");
      const ProbeSequence master = master_probe(config, map, topology, probe_seed);
      const auto probes = probe_prefixes(master, config.probe_sizes);

      Dataset dataset = archive_to_dataset(grid, topology, probes);
      dataset.meta["replication"] = rep;
      dataset.meta["n_hidden"] = n_hidden;
      dataset.meta["base_seed"] = config.base_seed;
      dataset.meta["probe_seed"] = probe_seed;
      dataset.meta["probe_mode"] = config.probe_mode;
      dataset.meta["probe_sizes"] = config.probe_sizes;
      dataset.meta["qd_seed"] = qd.seed;
      dataset.meta["maze"] = config_to_json(config)["maze"];
      dataset.meta["qd"] = config_to_json(config)["qd"];
      dataset.meta["coverage"] = {{"filled", grid.filled_count()},
                                  {"reachable", reachable_count}};

      const auto dir = out_dir / replication_dir_name(rep, n_hidden);
      write_dataset(dir, dataset);
      write_archive(dir / "archive.json",
                    archive_to_json(grid, config.maze, topology, qd));
      write_json_file(dir / "config.json", config_to_json(config));

      std::cout << dir.string() << ": " << grid.filled_count() << " elites ("
                << reachable_count << " reachable cells)\n";
    }
  }
  return 0;
}

int cmd_phenotype(const std::filesystem::path& dataset_dir,
                  const std::vector<int>& probe_sizes) {
  if (probe_sizes.empty()) {
    std::cerr << "phenotype: no probe sizes given\n";
    return 1;
  }
  for (const int k : probe_sizes)
    if (k < 1) {
      std::cerr << "phenotype: probe sizes must be >= 1\n";
      return 1;
    }

  Dataset dataset = load_dataset(dataset_dir);
  const nlohmann::json archive = read_archive(dataset_dir / "archive.json");
  const NicheGrid grid = archive_from_json(archive);
  const auto& topo_json = dataset.meta.at("topology");
  const NetTopology topology{topo_json.at("n_inputs").get<int>(),
                             topo_json.at("n_hidden").get<int>(),
                             topo_json.at("n_outputs").get<int>()};
  if (grid.filled_count() != static_cast<int>(dataset.rows()))
    throw std::runtime_error("phenotype: archive and dataset row counts differ");

  const auto probe_seed = dataset.meta.at("probe_seed").get<std::uint64_t>();
  const std::string probe_mode =
      dataset.meta.value("probe_mode", std::string("uniform"));
  int k_max = *std::max_element(probe_sizes.begin(), probe_sizes.end());

  ProbeSequence master;
  if (probe_mode == "trajectory") {
    const MazeMap map = build_maze(config_from_json({{"maze", dataset.meta.at("maze")}}).maze);
    master = draw_probe_trajectory(map, topology, k_max, probe_seed);
  } else {
    master = draw_probe(topology, k_max, probe_seed);
  }

  Dataset resampled = archive_to_dataset(grid, topology, probe_prefixes(master, probe_sizes));
  for (const auto& name : resampled.subset_names) {
    if (name == "weights") continue;
    dataset.subsets[name] = resampled.subsets.at(name);
    if (std::find(dataset.subset_names.begin(), dataset.subset_names.end(), name) ==
        dataset.subset_names.end())
      dataset.subset_names.push_back(name);
  }
  dataset.subset_names = canonical_subset_order(dataset.subset_names);
  dataset.meta["subsets"] = dataset.subset_names;
  auto sizes = dataset.meta.value("probe_sizes", std::vector<int>{});
  for (const int k : probe_sizes)
    if (std::find(sizes.begin(), sizes.end(), k) == sizes.end()) sizes.push_back(k);
  std::sort(sizes.begin(), sizes.end());
  dataset.meta["probe_sizes"] = sizes;

  write_dataset(dataset_dir, dataset);
  std::cout << dataset_dir.string() << ": subsets now";
  for (const auto& name : dataset.subset_names) std::cout << ' ' << name;
  std::cout << '\n';
  return 0;
}

int cmd_fit(const std::filesystem::path& dataset_dir, const std::string& subset,
            const std::string& model, const ExperimentConfig& config,
            std::uint64_t split_seed, const std::filesystem::path& model_out) {
  const Dataset dataset = load_dataset(dataset_dir);
  if (!dataset.subsets.count(subset)) {
    std::cerr << "fit: dataset has no subset named " << subset << '\n';
    return 1;
  }
  if (model != "kriging" && model != "linear") {
    std::cerr << "fit: unknown model kind " << model << '\n';
    return 1;
  }
  if (config.train_size >= dataset.rows()) {
    std::cerr << "fit: train size " << config.train_size << " >= dataset rows "
              << dataset.rows() << '\n';
    return 1;
  }

  ExperimentConfig local = config;
  local.models = {model};
  EvalFilter filter;
  filter.subset = subset;
  filter.model = model;
  const auto results = evaluate_models(dataset, local, 0, 0, split_seed, filter);
  if (results.empty() || results.front().status != "ok") {
    std::cerr << "fit failed: "
              << (results.empty() ? "no result" : results.front().status) << '\n';
    return 2;
  }
  const EvalResult& r = results.front();
  std::cout << "subset=" << r.subset << " model=" << r.model << " tau="
            << csv::format_double(r.tau) << " train=" << r.train_size
            << " test=" << r.test_size;
  if (r.model == "linear") std::cout << " ncoef=" << r.n_coefficients;
  std::cout << '\n';

  if (!model_out.empty()) {
    const Split split = split_and_scale(dataset.y, config.train_size, split_seed);
    const Eigen::MatrixXd x_train = select_rows(dataset.subsets.at(subset), split.train_rows);
    const Eigen::VectorXd y_train = select_rows(split.y_log, split.train_rows);
    nlohmann::json doc;
    if (model == "kriging") {
      const auto kind = subset == "weights" ? DistanceKind::genotypic_manhattan
                                            : DistanceKind::phenotypic_manhattan;
      doc = KrigingModel::fit(x_train, y_train, kind, config.kriging).to_json();
    } else {
      doc = fit_linear_aic(x_train, y_train, config.linear_max_steps).to_json();
    }
    doc["dataset"] = dataset_dir.string();
    doc["subset"] = subset;
    doc["split_seed"] = split_seed;
    doc["train_size"] = config.train_size;
    write_json_file(model_out, doc);
  }
  return 0;
}

int cmd_evaluate(const std::filesystem::path& dataset_root,
                 const std::filesystem::path& out_dir, const ExperimentConfig& config,
                 const EvalFilter& filter, const std::filesystem::path& cache_dir) {
  const auto dirs = find_replication_dirs(dataset_root);
  if (dirs.empty()) {
    std::cerr << "evaluate: no dataset directories (meta.json) under "
              << dataset_root.string() << '\n';
    return 1;
  }

  std::vector<EvalResult> results;
  std::vector<PcaResult> pca;
  std::vector<std::string> schema_issues;
  for (const auto& dir : dirs) {
    Dataset dataset;
    try {
      dataset = load_dataset(dir);
    } catch (const std::exception& e) {
      schema_issues.emplace_back(e.what());
      continue;
    }
    const int rep = dataset.meta.value("replication", 0);
    const int n_hidden =
        dataset.meta.contains("topology") && dataset.meta["topology"].contains("n_hidden")
            ? dataset.meta["topology"]["n_hidden"].get<int>()
            : 0;
    ExperimentConfig local = config;
    local.base_seed = dataset.meta.value("base_seed", config.base_seed);
    const std::uint64_t split_seed = run_stream_seed(local, rep, n_hidden, "split");
    if (config.train_size >= dataset.rows()) {
      schema_issues.push_back("train size " + std::to_string(config.train_size) +
                              " >= rows " + std::to_string(dataset.rows()) + " in " +
                              dir.string());
      continue;
    }
    auto rep_results =
        evaluate_models(dataset, local, rep, n_hidden, split_seed, filter, cache_dir);
    auto rep_pca = pca_results(dataset, rep, n_hidden, filter);
    results.insert(results.end(), rep_results.begin(), rep_results.end());
    pca.insert(pca.end(), rep_pca.begin(), rep_pca.end());
    std::cout << dir.string() << ": " << rep_results.size() << " model fits\n";
  }

  if (!schema_issues.empty()) {
    std::cerr << "evaluate: dataset problems:\n";
    for (const auto& issue : schema_issues) std::cerr << "  - " << issue << '\n';
    return 1;
  }

  std::filesystem::create_directories(out_dir);
  write_results_csv(out_dir / "results.csv", results);
  write_pca_csv(out_dir / "pca.csv", pca);

  int failed = 0;
  for (const auto& r : results)
    if (r.status != "ok") ++failed;
  write_json_file(out_dir / "summary.json",
                  {{"schema", "qds.summary.v1"},
                   {"datasets", dirs.size()},
                   {"results", results.size()},
                   {"failed_fits", failed},
                   {"train_size", config.train_size},
                   {"models", config.models}});
  return 0;
}

int cmd_analyze(const std::filesystem::path& dataset_root,
                const std::filesystem::path& out_dir) {
  const auto dirs = find_replication_dirs(dataset_root);
  if (dirs.empty()) {
    std::cerr << "analyze: no dataset directories (meta.json) under "
              << dataset_root.string() << '\n';
    return 1;
  }
  std::vector<PcaResult> pca;
  for (const auto& dir : dirs) {
    const Dataset dataset = load_dataset(dir);
    const int rep = dataset.meta.value("replication", 0);
    const int n_hidden = dataset.meta["topology"]["n_hidden"].get<int>();
    const auto rep_pca = pca_results(dataset, rep, n_hidden);
    pca.insert(pca.end(), rep_pca.begin(), rep_pca.end());
  }
  std::filesystem::create_directories(out_dir);
  write_pca_csv(out_dir / "pca.csv", pca);
  std::cout << out_dir.string() << "/pca.csv: " << pca.size() << " rows\n";
  return 0;
}

int cmd_report(const std::filesystem::path& results_dir) {
  const auto results_path = results_dir / "results.csv";
  if (!std::filesystem::exists(results_path)) {
    std::cerr << "report: missing " << results_path.string() << '\n';
    return 1;
  }
  const auto results = read_results_csv(results_path);
  if (results.empty()) {
    std::cerr << "report: no results in " << results_path.string() << '\n';
    return 1;
  }
  std::vector<PcaResult> pca;
  if (std::filesystem::exists(results_dir / "pca.csv"))
    pca = read_pca_csv(results_dir / "pca.csv");
  write_report(results_dir, results, pca);
  std::cout << results_dir.string()
            << ": wrote summary_models.csv, summary_pca.csv, fig6/7/8.json\n";
  return 0;
}

}  // namespace qds
