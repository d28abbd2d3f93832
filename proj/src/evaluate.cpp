#include "qds/evaluate.hpp"

#include "qds/csv.hpp"
#include "qds/dcache.hpp"
#include "qds/kriging.hpp"
#include "qds/linear.hpp"
#include "qds/stats.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace qds {

namespace {

DistanceKind subset_distance_kind(const std::string& subset) {
  return subset == "weights" ? DistanceKind::genotypic_manhattan
                             : DistanceKind::phenotypic_manhattan;
}

std::vector<double> row_of(const Eigen::MatrixXd& m, Eigen::Index i) {
  std::vector<double> row(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
  return row;
}

}  // namespace

std::vector<EvalResult> evaluate_models(const Dataset& dataset,
                                        const ExperimentConfig& config,
                                        int replication, int n_hidden,
                                        std::uint64_t split_seed,
                                        const EvalFilter& filter,
                                        const std::filesystem::path& cache_dir) {
  const Split split = split_and_scale(dataset.y, config.train_size, split_seed);
  const Eigen::VectorXd y_train = select_rows(split.y_log, split.train_rows);
  const Eigen::VectorXd y_test = select_rows(split.y_log, split.test_rows);

  std::vector<EvalResult> results;
  for (const auto& subset : dataset.subset_names) {
    if (filter.subset && *filter.subset != subset) continue;
    const Eigen::MatrixXd& features = dataset.subsets.at(subset);
    const Eigen::MatrixXd x_train = select_rows(features, split.train_rows);
    const Eigen::MatrixXd x_test = select_rows(features, split.test_rows);

    for (const auto& model_kind : config.models) {
      if (filter.model && *filter.model != model_kind) continue;
      EvalResult result;
      result.replication = replication;
      result.n_hidden = n_hidden;
      result.subset = subset;
      result.dim = static_cast<int>(features.cols());
      result.model = model_kind;
      result.train_size = static_cast<int>(split.train_rows.size());
      result.test_size = static_cast<int>(split.test_rows.size());
      try {
        Eigen::VectorXd predicted(x_test.rows());
        if (model_kind == "kriging") {
          KrigingOptions options = config.kriging;
          Eigen::MatrixXd train_distances;
          if (!cache_dir.empty()) {
            train_distances = cached_distance_matrix(
                x_train, subset_distance_kind(subset), cache_dir);
            options.train_distances = &train_distances;
          }
          const KrigingModel model =
              KrigingModel::fit(x_train, y_train, subset_distance_kind(subset), options);
          for (Eigen::Index i = 0; i < x_test.rows(); ++i)
            predicted[i] = model.predict(row_of(x_test, i)).mean;
        } else if (model_kind == "linear") {
          const LinearModel model =
              fit_linear_aic(x_train, y_train, config.linear_max_steps);
          result.n_coefficients = static_cast<int>(model.selected.size());
          for (Eigen::Index i = 0; i < x_test.rows(); ++i)
            predicted[i] = model.predict(row_of(x_test, i));
        } else {
          throw std::invalid_argument("unknown model kind: " + model_kind);
        }
        result.tau = kendall_tau(
            std::span<const double>(predicted.data(), static_cast<std::size_t>(predicted.size())),
            std::span<const double>(y_test.data(), static_cast<std::size_t>(y_test.size())));
      } catch (const std::exception& e) {
        result.status = std::string("error: ") + e.what();
        result.tau = std::numeric_limits<double>::quiet_NaN();
      }
      results.push_back(std::move(result));
    }
  }
  return results;
}

std::vector<PcaResult> pca_results(const Dataset& dataset, int replication, int n_hidden,
                                   const EvalFilter& filter) {
  std::vector<PcaResult> out;
  for (const auto& subset : dataset.subset_names) {
    if (filter.subset && *filter.subset != subset) continue;
    const Eigen::MatrixXd& features = dataset.subsets.at(subset);
    out.push_back({replication, n_hidden, subset, static_cast<int>(features.cols()),
                   pca_components_90(features)});
  }
  return out;
}

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<EvalResult>& results) {
  csv::Table table;
  table.name = "qds.results";
  table.header = {"replication", "nhidden", "subset",     "dim",       "model",
                  "tau",         "ncoef",   "train_size", "test_size", "status"};
  for (const auto& r : results)
    table.rows.push_back({std::to_string(r.replication), std::to_string(r.n_hidden),
                          r.subset, std::to_string(r.dim), r.model,
                          csv::format_double(r.tau), std::to_string(r.n_coefficients),
                          std::to_string(r.train_size), std::to_string(r.test_size),
                          r.status});
  csv::write_table(path, table);
}

std::vector<EvalResult> read_results_csv(const std::filesystem::path& path) {
  const auto table = csv::read_table(path, "qds.results");
  std::vector<EvalResult> results;
  for (const auto& row : table.rows) {
    EvalResult r;
    r.replication = std::atoi(row.at(0).c_str());
    r.n_hidden = std::atoi(row.at(1).c_str());
    r.subset = row.at(2);
    r.dim = std::atoi(row.at(3).c_str());
    r.model = row.at(4);
    r.tau = std::strtod(row.at(5).c_str(), nullptr);
    r.n_coefficients = std::atoi(row.at(6).c_str());
    r.train_size = std::atoi(row.at(7).c_str());
    r.test_size = std::atoi(row.at(8).c_str());
    r.status = row.at(9);
    results.push_back(std::move(r));
  }
  return results;
}

void write_pca_csv(const std::filesystem::path& path,
                   const std::vector<PcaResult>& results) {
  csv::Table table;
  table.name = "qds.pca";
  table.header = {"replication", "nhidden", "subset", "dim", "components90"};
  for (const auto& r : results)
    table.rows.push_back({std::to_string(r.replication), std::to_string(r.n_hidden),
                          r.subset, std::to_string(r.dim),
                          std::to_string(r.components90)});
  csv::write_table(path, table);
}

std::vector<PcaResult> read_pca_csv(const std::filesystem::path& path) {
  const auto table = csv::read_table(path, "qds.pca");
  std::vector<PcaResult> results;
  for (const auto& row : table.rows) {
    PcaResult r;
    r.replication = std::atoi(row.at(0).c_str());
    r.n_hidden = std::atoi(row.at(1).c_str());
    r.subset = row.at(2);
    r.dim = std::atoi(row.at(3).c_str());
    r.components90 = std::atoi(row.at(4).c_str());
    results.push_back(std::move(r));
  }
  return results;
}

namespace {

struct GroupKey {
  int n_hidden;
  std::string subset;
  std::string model;  // empty for PCA groups

  bool operator<(const GroupKey& other) const {
    if (n_hidden != other.n_hidden) return n_hidden < other.n_hidden;
    if (subset != other.subset) return subset < other.subset;
    return model < other.model;
  }
};

}  // namespace

void write_report(const std::filesystem::path& out_dir,
                  const std::vector<EvalResult>& results,
                  const std::vector<PcaResult>& pca) {
  std::filesystem::create_directories(out_dir);

  std::map<GroupKey, std::vector<const EvalResult*>> model_groups;
  for (const auto& r : results)
    if (r.status == "ok")
      model_groups[{r.n_hidden, r.subset, r.model}].push_back(&r);

  csv::Table summary;
  summary.name = "qds.summary_models";
  summary.header = {"nhidden", "subset", "dim",     "model",  "n",
                    "tau_q25", "tau_median", "tau_q75", "ncoef_median"};
  nlohmann::json fig6 = {{"schema", "qds.fig6.v1"}, {"groups", nlohmann::json::array()}};
  nlohmann::json fig8 = {{"schema", "qds.fig8.v1"}, {"groups", nlohmann::json::array()}};
  for (const auto& [key, group] : model_groups) {
    std::vector<double> taus;
    std::vector<double> ncoefs;
    for (const auto* r : group) {
      taus.push_back(r->tau);
      ncoefs.push_back(static_cast<double>(r->n_coefficients));
    }
    const Quartiles q = quartiles(taus);
    const double ncoef_median = median(ncoefs);
    summary.rows.push_back(
        {std::to_string(key.n_hidden), key.subset, std::to_string(group.front()->dim),
         key.model, std::to_string(group.size()), csv::format_double(q.q25),
         csv::format_double(q.q50), csv::format_double(q.q75),
         csv::format_double(ncoef_median)});
    fig6["groups"].push_back({{"nhidden", key.n_hidden},
                              {"subset", key.subset},
                              {"dim", group.front()->dim},
                              {"model", key.model},
                              {"taus", taus},
                              {"median", q.q50},
                              {"q25", q.q25},
                              {"q75", q.q75}});
    if (key.model == "linear")
      fig8["groups"].push_back({{"nhidden", key.n_hidden},
                                {"subset", key.subset},
                                {"dim", group.front()->dim},
                                {"ncoefs", ncoefs},
                                {"median", ncoef_median}});
  }
  csv::write_table(out_dir / "summary_models.csv", summary);

  std::map<GroupKey, std::vector<const PcaResult*>> pca_groups;
  for (const auto& r : pca) pca_groups[{r.n_hidden, r.subset, ""}].push_back(&r);

  csv::Table pca_summary;
  pca_summary.name = "qds.summary_pca";
  pca_summary.header = {"nhidden", "subset", "dim", "n", "components90_median"};
  nlohmann::json fig7 = {{"schema", "qds.fig7.v1"}, {"groups", nlohmann::json::array()}};
  for (const auto& [key, group] : pca_groups) {
    std::vector<double> counts;
    for (const auto* r : group) counts.push_back(static_cast<double>(r->components90));
    const double count_median = median(counts);
    pca_summary.rows.push_back({std::to_string(key.n_hidden), key.subset,
                                std::to_string(group.front()->dim),
                                std::to_string(group.size()),
                                csv::format_double(count_median)});
    fig7["groups"].push_back({{"nhidden", key.n_hidden},
                              {"subset", key.subset},
                              {"dim", group.front()->dim},
                              {"counts", counts},
                              {"median", count_median}});
  }
  csv::write_table(out_dir / "summary_pca.csv", pca_summary);

  const std::pair<const char*, const nlohmann::json*> figures[] = {
      {"fig6.json", &fig6}, {"fig7.json", &fig7}, {"fig8.json", &fig8}};
  for (const auto& [name, doc] : figures) {
    std::ofstream out(out_dir / name);
    out << doc->dump(2) << '\n';
  }
}

}  // namespace qds
