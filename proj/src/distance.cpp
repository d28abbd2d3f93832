#include "qds/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace qds {

std::string to_string(DistanceKind kind) {
  return kind == DistanceKind::genotypic_manhattan ? "genotypicManhattan"
                                                   : "phenotypicManhattan";
}

DistanceKind distance_kind_from_string(const std::string& name) {
  if (name == "genotypicManhattan") return DistanceKind::genotypic_manhattan;
  if (name == "phenotypicManhattan") return DistanceKind::phenotypic_manhattan;
  throw std::invalid_argument("unknown distance kind: " + name);
}

double manhattan(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("manhattan: length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

static double row_manhattan(const Eigen::MatrixXd& x, Eigen::Index i,
                            const Eigen::MatrixXd& y, Eigen::Index j) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < x.cols(); ++c) sum += std::abs(x(i, c) - y(j, c));
  return sum;
}

Eigen::MatrixXd manhattan_distance_matrix_serial(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = row_manhattan(x, i, x, j);
      d(i, j) = v;
      d(j, i) = v;
    }
  return d;
}

Eigen::MatrixXd manhattan_distance_matrix(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = row_manhattan(x, i, x, j);
      d(i, j) = v;
      d(j, i) = v;
    }
  return d;
}

Eigen::MatrixXd manhattan_cross_distances(const Eigen::MatrixXd& a,
                                          const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols())
    throw std::invalid_argument("cross distances: column mismatch");
  Eigen::MatrixXd d(a.rows(), b.rows());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) d(i, j) = row_manhattan(a, i, b, j);
  return d;
}

}  // namespace qds
