#include "qds/stats.hpp"

#include "qds/rng.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qds {

namespace {

// Counts pairs i < j with values[i] > values[j] (strictly); equal values do
// not count. Bottom-up merge sort.
std::int64_t count_inversions(std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<double> buffer(n);
  std::int64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t left = 0; left + width < n; left += 2 * width) {
      const std::size_t mid = left + width;
      const std::size_t right = std::min(left + 2 * width, n);
      std::size_t i = left, j = mid, k = left;
      while (i < mid && j < right) {
        if (values[j] < values[i]) {
          inversions += static_cast<std::int64_t>(mid - i);
          buffer[k++] = values[j++];
        } else {
          buffer[k++] = values[i++];
        }
      }
      while (i < mid) buffer[k++] = values[i++];
      while (j < right) buffer[k++] = values[j++];
      std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(left),
                buffer.begin() + static_cast<std::ptrdiff_t>(right),
                values.begin() + static_cast<std::ptrdiff_t>(left));
    }
  }
  return inversions;
}

std::int64_t tie_pair_count(std::vector<double> sorted_values) {
  std::int64_t pairs = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sorted_values.size(); ++i) {
    if (i < sorted_values.size() && sorted_values[i] == sorted_values[i - 1]) {
      ++run;
    } else {
      pairs += static_cast<std::int64_t>(run) * static_cast<std::int64_t>(run - 1) / 2;
      run = 1;
    }
  }
  return pairs;
}

double quantile_type7(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const double pos = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double kendall_tau(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n != b.size()) throw std::invalid_argument("kendall: length mismatch");
  if (n < 2) throw std::invalid_argument("kendall: need at least 2 observations");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (a[i] != a[j]) return a[i] < a[j];
    return b[i] < b[j];
  });

  // Tie bookkeeping over the (a, b)-sorted sequence.
  std::int64_t ties_a = 0, ties_both = 0;
  std::size_t run_a = 1, run_ab = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    const bool same_a = i < n && a[order[i]] == a[order[i - 1]];
    const bool same_ab = same_a && b[order[i]] == b[order[i - 1]];
    if (same_a) {
      ++run_a;
    } else {
      ties_a += static_cast<std::int64_t>(run_a) * static_cast<std::int64_t>(run_a - 1) / 2;
      run_a = 1;
    }
    if (same_ab) {
      ++run_ab;
    } else {
      ties_both +=
          static_cast<std::int64_t>(run_ab) * static_cast<std::int64_t>(run_ab - 1) / 2;
      run_ab = 1;
    }
  }

  std::vector<double> b_sorted_by_a(n);
  for (std::size_t i = 0; i < n; ++i) b_sorted_by_a[i] = b[order[i]];
  const std::int64_t discordant = count_inversions(b_sorted_by_a);

  std::vector<double> b_values(b.begin(), b.end());
  std::sort(b_values.begin(), b_values.end());
  const std::int64_t ties_b = tie_pair_count(std::move(b_values));

  const std::int64_t total =
      static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  if (ties_a == total) throw std::invalid_argument("kendall: first argument is constant");
  if (ties_b == total) throw std::invalid_argument("kendall: second argument is constant");

  const std::int64_t concordant_minus_discordant =
      total - ties_a - ties_b + ties_both - 2 * discordant;
  return static_cast<double>(concordant_minus_discordant) /
         std::sqrt(static_cast<double>(total - ties_a) *
                   static_cast<double>(total - ties_b));
}

std::vector<double> pca_eigenvalues(const Eigen::MatrixXd& x, bool correlation) {
  if (x.rows() < 2 || x.cols() < 1)
    throw std::invalid_argument("pca: need >= 2 rows and >= 1 column");
  Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  if (correlation) {
    for (Eigen::Index j = 0; j < centered.cols(); ++j) {
      const double sd = std::sqrt(centered.col(j).squaredNorm() /
                                  static_cast<double>(x.rows() - 1));
      if (sd > 0.0) centered.col(j) /= sd;
    }
  }
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(centered);
  const auto& singular = svd.singularValues();
  std::vector<double> eigenvalues(static_cast<std::size_t>(singular.size()));
  for (Eigen::Index i = 0; i < singular.size(); ++i)
    eigenvalues[static_cast<std::size_t>(i)] =
        singular[i] * singular[i] / static_cast<double>(x.rows() - 1);
  return eigenvalues;  // BDCSVD returns singular values in descending order
}

int pca_components_90(const Eigen::MatrixXd& x, bool correlation) {
  const std::vector<double> eigenvalues = pca_eigenvalues(x, correlation);
  const double total = std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
  if (!(total > 0.0)) throw std::runtime_error("pca: zero total variance");
  double cumulative = 0.0;
  for (std::size_t m = 0; m < eigenvalues.size(); ++m) {
    cumulative += eigenvalues[m];
    if (cumulative >= (0.9 - 1e-12) * total) return static_cast<int>(m) + 1;
  }
  return static_cast<int>(eigenvalues.size());
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  return quantile_type7(values, 0.5);
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("quartiles: empty input");
  std::sort(values.begin(), values.end());
  return {quantile_type7(values, 0.25), quantile_type7(values, 0.5),
          quantile_type7(values, 0.75)};
}

namespace {

std::pair<double, double> percentile_interval(std::vector<double> stats, double lo,
                                              double hi) {
  std::sort(stats.begin(), stats.end());
  return {quantile_type7(stats, lo), quantile_type7(stats, hi)};
}

}  // namespace

std::pair<double, double> bootstrap_median_ci(const std::vector<double>& values,
                                              int resamples, std::uint64_t seed,
                                              double lo, double hi) {
  if (values.empty()) throw std::invalid_argument("bootstrap: empty input");
  Rng rng(seed);
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  std::vector<double> resample(values.size());
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < values.size(); ++i)
      resample[i] = values[static_cast<std::size_t>(
          rng.uniform_int(static_cast<int>(values.size())))];
    stats[static_cast<std::size_t>(r)] = median(resample);
  }
  return percentile_interval(std::move(stats), lo, hi);
}

std::pair<double, double> bootstrap_median_diff_ci(const std::vector<double>& a,
                                                   const std::vector<double>& b,
                                                   int resamples, std::uint64_t seed,
                                                   double lo, double hi) {
  if (a.empty() || a.size() != b.size())
    throw std::invalid_argument("bootstrap: paired samples required");
  Rng rng(seed);
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  std::vector<double> ra(a.size()), rb(b.size());
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto pick =
          static_cast<std::size_t>(rng.uniform_int(static_cast<int>(a.size())));
      ra[i] = a[pick];
      rb[i] = b[pick];
    }
    stats[static_cast<std::size_t>(r)] = median(ra) - median(rb);
  }
  return percentile_interval(std::move(stats), lo, hi);
}

}  // namespace qds
