#pragma once
// Rank correlation, PCA dimensionality, and small summary helpers.

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace qds {

// Kendall's tau-b (tie corrected), computed with a merge-sort inversion
// count in O(n log n). Throws std::invalid_argument on length mismatch,
// n < 2, or an all-constant argument (tau is undefined there).
double kendall_tau(std::span<const double> a, std::span<const double> b);

// Smallest number of principal components explaining at least 90% of the
// column variance. Columns are centered; with `correlation` they are also
// scaled to unit variance (constant columns stay zero). Throws on zero
// total variance.
int pca_components_90(const Eigen::MatrixXd& x, bool correlation = false);

// Eigenvalues of the feature covariance in descending order (via SVD of the
// centered matrix).
std::vector<double> pca_eigenvalues(const Eigen::MatrixXd& x, bool correlation = false);

double median(std::vector<double> values);

struct Quartiles {
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
};

// Linear-interpolation quantiles (the common "type 7" rule).
Quartiles quartiles(std::vector<double> values);

// Percentile bootstrap CI for the median of one sample.
std::pair<double, double> bootstrap_median_ci(const std::vector<double>& values,
                                              int resamples, std::uint64_t seed,
                                              double lo = 0.05, double hi = 0.95);

// Percentile bootstrap CI for median(a) - median(b) with paired resampling
// (a[i] and b[i] come from the same replication).
std::pair<double, double> bootstrap_median_diff_ci(const std::vector<double>& a,
                                                   const std::vector<double>& b,
                                                   int resamples, std::uint64_t seed,
                                                   double lo = 0.05, double hi = 0.95);

}  // namespace qds
