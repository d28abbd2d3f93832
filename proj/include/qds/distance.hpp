#pragma once
// Manhattan distances between feature vectors. The same metric serves both
// feature spaces: genome weight vectors and sampled behavior vectors; the
// kind tag records which one a matrix was computed from.
//
// The pairwise kernel has an OpenMP-parallel implementation and a serial
// reference; both produce bit-identical matrices, which the tests assert
// and the bench tool times.

#include <Eigen/Core>

#include <span>
#include <string>

namespace qds {

enum class DistanceKind { genotypic_manhattan, phenotypic_manhattan };

std::string to_string(DistanceKind kind);
DistanceKind distance_kind_from_string(const std::string& name);

// Sum of absolute coordinate differences; throws on length mismatch.
double manhattan(std::span<const double> a, std::span<const double> b);

// Symmetric pairwise distance matrix over the rows of X (zero diagonal).
Eigen::MatrixXd manhattan_distance_matrix(const Eigen::MatrixXd& x);
Eigen::MatrixXd manhattan_distance_matrix_serial(const Eigen::MatrixXd& x);

// Rectangular distances: rows of A against rows of B.
Eigen::MatrixXd manhattan_cross_distances(const Eigen::MatrixXd& a,
                                          const Eigen::MatrixXd& b);

}  // namespace qds
