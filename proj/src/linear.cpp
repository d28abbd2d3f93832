#include "qds/linear.hpp"

#include <Eigen/QR>

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qds {

double linear_aic(double rss, Eigen::Index n, int n_selected) {
  const double mean_rss = std::max(rss, 1e-300) / static_cast<double>(n);
  return static_cast<double>(n) * std::log(mean_rss) + 2.0 * (n_selected + 1);
}

namespace {

struct FitResult {
  Eigen::VectorXd beta;
  double rss = std::numeric_limits<double>::infinity();
  bool ok = false;
};

// Least squares of y on [1, x[:, features]]; not ok when the design is
// rank deficient (collinear feature set).
FitResult least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const std::vector<int>& features) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = static_cast<Eigen::Index>(features.size());
  Eigen::MatrixXd design(n, p + 1);
  design.col(0).setOnes();
  for (Eigen::Index j = 0; j < p; ++j)
    design.col(j + 1) = x.col(features[static_cast<std::size_t>(j)]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  FitResult out;
  if (qr.rank() < design.cols()) return out;
  out.beta = qr.solve(y);
  out.rss = (y - design * out.beta).squaredNorm();
  out.ok = out.beta.allFinite();
  return out;
}

}  // namespace

LinearModel fit_linear_aic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           int max_steps, bool parallel) {
  const Eigen::Index n = x.rows();
  if (n < 3) throw std::invalid_argument("linear: need at least 3 samples");
  if (y.size() != n) throw std::invalid_argument("linear: observation count mismatch");
  if (!y.allFinite() || !x.allFinite())
    throw std::invalid_argument("linear: non-finite input");

  LinearModel model;
  model.n_features = x.cols();
  model.coefficients = Eigen::VectorXd::Constant(1, y.mean());
  model.aic = linear_aic((y.array() - y.mean()).matrix().squaredNorm(), n, 0);
  model.aic_path.push_back(model.aic);

  const int dof_cap = static_cast<int>(n) - 2;
  const int step_cap = max_steps < 0 ? dof_cap : std::min(max_steps, dof_cap);
  std::vector<char> in_model(static_cast<std::size_t>(x.cols()), 0);

  while (static_cast<int>(model.selected.size()) < step_cap) {
    const Eigen::Index n_candidates = x.cols();
    std::vector<double> candidate_aic(static_cast<std::size_t>(n_candidates),
                                      std::numeric_limits<double>::infinity());

    auto scan_one = [&](Eigen::Index j) {
      if (in_model[static_cast<std::size_t>(j)]) return;
      std::vector<int> trial = model.selected;
      trial.push_back(static_cast<int>(j));
      const FitResult fit = least_squares(x, y, trial);
      if (!fit.ok) return;  // collinear candidate: skipped, never inserted
      candidate_aic[static_cast<std::size_t>(j)] =
          linear_aic(fit.rss, n, static_cast<int>(trial.size()));
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
      for (Eigen::Index j = 0; j < n_candidates; ++j) scan_one(j);
    } else {
      for (Eigen::Index j = 0; j < n_candidates; ++j) scan_one(j);
    }

    int best = -1;
    double best_aic = model.aic;
    for (Eigen::Index j = 0; j < n_candidates; ++j) {
      if (candidate_aic[static_cast<std::size_t>(j)] < best_aic) {
        best_aic = candidate_aic[static_cast<std::size_t>(j)];
        best = static_cast<int>(j);
      }
    }
    if (best < 0) break;  // no candidate lowers the AIC

    model.selected.push_back(best);
    in_model[static_cast<std::size_t>(best)] = 1;
    model.aic = best_aic;
    model.aic_path.push_back(best_aic);
  }

  const FitResult final_fit = least_squares(x, y, model.selected);
  if (!final_fit.ok) throw std::runtime_error("linear: final refit failed");
  model.coefficients = final_fit.beta;
  return model;
}

double LinearModel::predict(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != n_features)
    throw std::invalid_argument("linear predict: feature dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(n_features) + ")");
  double value = coefficients[0];
  for (std::size_t j = 0; j < selected.size(); ++j)
    value += coefficients[static_cast<Eigen::Index>(j) + 1] *
             x[static_cast<std::size_t>(selected[j])];
  return value;
}

nlohmann::json LinearModel::to_json() const {
  std::vector<double> coef(coefficients.data(), coefficients.data() + coefficients.size());
  return nlohmann::json{{"schema", "qds.model.linear.v1"},
                        {"selected", selected},
                        {"coefficients", coef},
                        {"aic", aic},
                        {"aic_path", aic_path},
                        {"n_features", n_features}};
}

LinearModel LinearModel::from_json(const nlohmann::json& j) {
  if (j.at("schema").get<std::string>() != "qds.model.linear.v1")
    throw std::runtime_error("linear: unknown model schema");
  LinearModel model;
  model.selected = j.at("selected").get<std::vector<int>>();
  const auto coef = j.at("coefficients").get<std::vector<double>>();
  model.coefficients = Eigen::Map<const Eigen::VectorXd>(coef.data(),
                                                         static_cast<Eigen::Index>(coef.size()));
  model.aic = j.at("aic").get<double>();
  model.aic_path = j.at("aic_path").get<std::vector<double>>();
  model.n_features = j.at("n_features").get<Eigen::Index>();
  return model;
}

}  // namespace qds
