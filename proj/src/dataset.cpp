#include "qds/dataset.hpp"

#include "qds/csv.hpp"
#include "qds/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace qds {

std::vector<std::string> canonical_subset_order(const std::vector<std::string>& names) {
  std::vector<std::string> ordered = names;
  auto dim_of = [](const std::string& name) {
    const auto pos = name.find_last_of('_');
    return pos == std::string::npos ? 0 : std::atoi(name.c_str() + pos + 1);
  };
  std::sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) {
    const bool wa = a == "weights";
    const bool wb = b == "weights";
    if (wa != wb) return wa;
    const int da = dim_of(a);
    const int db = dim_of(b);
    if (da != db) return da < db;
    return a < b;
  });
  return ordered;
}

void write_dataset(const std::filesystem::path& dir, const Dataset& dataset) {
  std::filesystem::create_directories(dir);
  for (const auto& name : dataset.subset_names) {
    const auto& m = dataset.subsets.at(name);
    csv::write_matrix(dir / (name + ".csv"), "qds." + name,
                      name == "weights" ? "w" : "o", m,
                      {{"rows", std::to_string(m.rows())}});
  }
  csv::Table fitness;
  fitness.name = "qds.fitness";
  fitness.header = {"row", "fitness"};
  for (Eigen::Index i = 0; i < dataset.y.size(); ++i)
    fitness.rows.push_back({std::to_string(i), csv::format_double(dataset.y[i])});
  csv::write_table(dir / "fitness.csv", fitness);

  std::ofstream meta(dir / "meta.json");
  meta << dataset.meta.dump(2) << '\n';
}

Dataset load_dataset(const std::filesystem::path& dir) {
  std::vector<std::string> issues;
  Dataset dataset;

  const auto meta_path = dir / "meta.json";
  if (!std::filesystem::exists(meta_path)) {
    issues.push_back("missing file: " + meta_path.string());
  } else {
    std::ifstream in(meta_path);
    try {
      dataset.meta = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      issues.push_back("unparseable meta.json: " + std::string(e.what()));
    }
  }

  std::vector<std::string> names;
  if (dataset.meta.contains("subsets")) {
    names = dataset.meta["subsets"].get<std::vector<std::string>>();
  } else if (issues.empty()) {
    issues.push_back("meta.json lacks a subsets list: " + meta_path.string());
  }

  for (const auto& name : names) {
    const auto path = dir / (name + ".csv");
    try {
      dataset.subsets[name] = csv::table_to_matrix(csv::read_table(path, "qds." + name));
      dataset.subset_names.push_back(name);
    } catch (const std::exception& e) {
      issues.push_back(e.what());
    }
  }

  const auto fitness_path = dir / "fitness.csv";
  try {
    const auto table = csv::read_table(fitness_path, "qds.fitness");
    dataset.y.resize(static_cast<Eigen::Index>(table.rows.size()));
    for (std::size_t i = 0; i < table.rows.size(); ++i)
      dataset.y[static_cast<Eigen::Index>(i)] = std::strtod(table.rows[i].at(1).c_str(), nullptr);
  } catch (const std::exception& e) {
    issues.push_back(e.what());
  }

  if (issues.empty()) {
    for (const auto& name : dataset.subset_names) {
      const auto r = dataset.subsets.at(name).rows();
      if (r != dataset.y.size())
        issues.push_back("row count mismatch in " + (dir / (name + ".csv")).string() +
                         ": " + std::to_string(r) + " rows vs " +
                         std::to_string(dataset.y.size()) + " fitness rows");
    }
    for (Eigen::Index i = 0; i < dataset.y.size(); ++i)
      if (!std::isfinite(dataset.y[i]) || dataset.y[i] < 0.0) {
        issues.push_back("non-finite or negative fitness at row " + std::to_string(i) +
                         " in " + fitness_path.string());
        break;
      }
  }

  if (!issues.empty()) {
    std::string message = "dataset schema check failed for " + dir.string() + ":";
    for (const auto& issue : issues) message += "\n  - " + issue;
    throw std::runtime_error(message);
  }
  return dataset;
}

Split split_and_scale(const Eigen::VectorXd& y, int train_size, std::uint64_t seed) {
  const int rows = static_cast<int>(y.size());
  if (train_size < 1 || train_size >= rows)
    throw std::invalid_argument("split: train size must be in [1, rows)");

  std::vector<int> order(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  for (int i = rows - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(rng.uniform_int(i + 1))]);

  Split split;
  split.train_rows.assign(order.begin(), order.begin() + train_size);
  split.test_rows.assign(order.begin() + train_size, order.end());
  std::sort(split.train_rows.begin(), split.train_rows.end());
  std::sort(split.test_rows.begin(), split.test_rows.end());
  split.y_log = (y.array() + kLogFitnessEpsilon).log();
  return split;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

Eigen::VectorXd select_rows(const Eigen::VectorXd& v, const std::vector<int>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = v[rows[i]];
  return out;
}

}  // namespace qds
