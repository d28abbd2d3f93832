#pragma once
// Experiment dataset: one row per archived controller, described by several
// feature subsets (the weight vector plus behavior vectors of increasing
// length) that all share row order, and a raw fitness vector. Persisted as
// one CSV per subset plus fitness.csv and meta.json.

#include <Eigen/Core>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace qds {

struct Dataset {
  std::vector<std::string> subset_names;           // canonical order
  std::map<std::string, Eigen::MatrixXd> subsets;  // name -> rows x features
  Eigen::VectorXd y;                               // raw path lengths, >= 0
  nlohmann::json meta;

  Eigen::Index rows() const { return y.size(); }
};

// "weights" first, then behavior subsets by ascending dimension.
std::vector<std::string> canonical_subset_order(const std::vector<std::string>& names);

void write_dataset(const std::filesystem::path& dir, const Dataset& dataset);

// Validates the directory layout and shapes; throws std::runtime_error with
// an itemized message naming every offending file.
Dataset load_dataset(const std::filesystem::path& dir);

// Offset applied before the log transform so motionless controllers
// (path length zero) stay finite.
inline constexpr double kLogFitnessEpsilon = 1e-6;

struct Split {
  std::vector<int> train_rows;  // ascending
  std::vector<int> test_rows;   // ascending
  Eigen::VectorXd y_log;        // ln(y + epsilon) for every row
};

// Seeded uniform split without replacement; features are untouched, the
// observation vector is log-scaled. Throws when train_size >= rows.
Split split_and_scale(const Eigen::VectorXd& y, int train_size, std::uint64_t seed);

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<int>& rows);
Eigen::VectorXd select_rows(const Eigen::VectorXd& v, const std::vector<int>& rows);

}  // namespace qds
