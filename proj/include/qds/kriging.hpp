#pragma once
// Kriging over an isotropic exponential kernel k(x,x') = exp(-theta *
// d(x,x')) with Manhattan distances and an additive nugget on the kernel
// diagonal. Fitting profiles the process mean and variance in closed form
// and searches (log10 theta, log10 nugget) with the dividing-rectangles
// optimizer under a fixed likelihood-evaluation budget.
//
// The model is agnostic to what the feature vectors mean: weight vectors
// and sampled behavior vectors go through exactly the same code path, only
// the recorded DistanceKind differs.

#include "qds/direct.hpp"
#include "qds/distance.hpp"

#include <Eigen/Core>

#include <nlohmann/json_fwd.hpp>

#include <span>
#include <utility>

namespace qds {

inline double exp_kernel(double distance, double theta) {
  return std::exp(-theta * distance);
}

struct KrigingOptions {
  int mle_budget = 2000;
  double ftol_rel = 1e-16;
  double log10_theta_lo = -6.0;
  double log10_theta_hi = 3.0;
  double log10_nugget_lo = -12.0;
  double log10_nugget_hi = 0.0;
  bool optimize_nugget = true;    // when false the nugget stays at fixed_nugget
  double fixed_nugget = 1e-8;
  bool use_grid_fallback = false; // cross-check optimizer instead of DIRECT
  // Optional externally computed pairwise train distances (n x n).
  const Eigen::MatrixXd* train_distances = nullptr;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

class KrigingModel {
 public:
  // Maximum-likelihood fit. Throws std::invalid_argument on malformed
  // input (n < 2, non-finite observations) and std::runtime_error when the
  // kernel matrix cannot be factorized at any probed nugget.
  static KrigingModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          DistanceKind kind, const KrigingOptions& options = {});

  // Same model with caller-chosen kernel parameters (no search).
  static KrigingModel fit_with_params(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                      DistanceKind kind, double theta, double nugget);

  Prediction predict(std::span<const double> x) const;

  double theta() const { return theta_; }
  double nugget() const { return nugget_; }
  double mu() const { return mu_; }
  double sigma2() const { return sigma2_; }
  DistanceKind kind() const { return kind_; }
  int likelihood_evaluations() const { return likelihood_evaluations_; }
  Eigen::Index train_size() const { return train_x_.rows(); }
  Eigen::Index feature_dim() const { return train_x_.cols(); }
  const Eigen::MatrixXd& train_x() const { return train_x_; }

  nlohmann::json to_json() const;
  // Rebuilds a serialized model against the referenced training data; the
  // stored row hash must match.
  static KrigingModel from_json(const nlohmann::json& j, const Eigen::MatrixXd& x,
                                const Eigen::VectorXd& y);

 private:
  KrigingModel() = default;
  void factorize(const Eigen::MatrixXd& distances);

  Eigen::MatrixXd train_x_;
  Eigen::VectorXd train_y_;
  Eigen::MatrixXd chol_lower_;  // L with L L^T = K + nugget I
  Eigen::VectorXd alpha_;       // (K + nugget I)^-1 (y - mu 1)
  DistanceKind kind_ = DistanceKind::genotypic_manhattan;
  double theta_ = 1.0;
  double nugget_ = 0.0;
  double mu_ = 0.0;
  double sigma2_ = 0.0;
  bool constant_y_ = false;
  int likelihood_evaluations_ = 0;
};

// Negative concentrated log-likelihood at (theta, nugget) given precomputed
// pairwise distances; +inf when the factorization fails. Exposed for the
// optimizer cross-checks.
double kriging_negative_log_likelihood(const Eigen::MatrixXd& distances,
                                       const Eigen::VectorXd& y, double theta,
                                       double nugget);

// FNV-1a over the canonical text form of a matrix; keys model/dataset
// references and the distance cache.
std::uint64_t matrix_hash(const Eigen::MatrixXd& m);

}  // namespace qds
