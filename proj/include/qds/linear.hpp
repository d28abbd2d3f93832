#pragma once
// Baseline linear regression with greedy forward feature selection driven
// by AIC = n ln(RSS/n) + 2 (p+1). Main effects only, always with an
// intercept; selection stops when no candidate lowers the AIC, when the
// step limit is reached, or when another coefficient would exhaust the
// residual degrees of freedom. The per-step candidate scan is OpenMP
// parallel with a serial reference path.

#include <Eigen/Core>

#include <nlohmann/json_fwd.hpp>

#include <span>
#include <vector>

namespace qds {

struct LinearModel {
  std::vector<int> selected;       // feature indices in selection order
  Eigen::VectorXd coefficients;    // intercept first, then one per selected
  double aic = 0.0;
  std::vector<double> aic_path;    // intercept-only AIC, then after each add
  Eigen::Index n_features = 0;

  double predict(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& j);
};

double linear_aic(double rss, Eigen::Index n, int n_selected);

// max_steps < 0 means no explicit step limit (the dof cap still applies).
LinearModel fit_linear_aic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           int max_steps = -1, bool parallel = true);

}  // namespace qds
