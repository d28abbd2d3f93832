#include "qds/kriging.hpp"

#include "qds/csv.hpp"

#include <Eigen/Cholesky>

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace qds {

namespace {

// Cholesky of K + nugget I for K built from distances; empty on failure.
Eigen::MatrixXd kernel_cholesky(const Eigen::MatrixXd& distances, double theta,
                                double nugget) {
  const Eigen::Index n = distances.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = exp_kernel(distances(i, j), theta);
    k(i, i) += nugget;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) return {};
  return llt.matrixL();
}

struct ProfiledParams {
  double mu = 0.0;
  double sigma2 = 0.0;
  double log_det = 0.0;
  Eigen::VectorXd alpha;
  bool ok = false;
};

ProfiledParams profile_params(const Eigen::MatrixXd& chol_lower,
                              const Eigen::VectorXd& y) {
  ProfiledParams p;
  const Eigen::Index n = y.size();
  const auto lower = chol_lower.triangularView<Eigen::Lower>();
  const auto upper = chol_lower.transpose().triangularView<Eigen::Upper>();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd kinv_y = upper.solve(lower.solve(y));
  const Eigen::VectorXd kinv_1 = upper.solve(lower.solve(ones));
  const double denom = kinv_1.sum();
  if (!std::isfinite(denom) || denom == 0.0) return p;
  p.mu = kinv_y.sum() / denom;
  const Eigen::VectorXd residual = y - p.mu * ones;
  p.alpha = kinv_y - p.mu * kinv_1;  // == (K + nugget I)^-1 residual
  p.sigma2 = residual.dot(p.alpha) / static_cast<double>(n);
  p.log_det = 2.0 * chol_lower.diagonal().array().log().sum();
  p.ok = std::isfinite(p.mu) && std::isfinite(p.sigma2) && std::isfinite(p.log_det);
  return p;
}

}  // namespace

double kriging_negative_log_likelihood(const Eigen::MatrixXd& distances,
                                       const Eigen::VectorXd& y, double theta,
                                       double nugget) {
  const Eigen::MatrixXd chol = kernel_cholesky(distances, theta, nugget);
  if (chol.size() == 0) return kInf;
  const ProfiledParams p = profile_params(chol, y);
  if (!p.ok) return kInf;
  const double sigma2 = std::max(p.sigma2, 1e-300);
  return 0.5 * (static_cast<double>(y.size()) * std::log(sigma2) + p.log_det);
}

void KrigingModel::factorize(const Eigen::MatrixXd& distances) {
  double nugget = nugget_;
  Eigen::MatrixXd chol;
  while (true) {
    chol = kernel_cholesky(distances, theta_, nugget);
    if (chol.size() != 0) break;
    // Ill-conditioned kernel: escalate the regularization before giving up.
    const double next = (nugget <= 0.0) ? 1e-12 : nugget * 10.0;
    if (next > 1.0)
      throw std::runtime_error(
          "kriging: kernel matrix not positive definite even at nugget 1 "
          "(theta=" + std::to_string(theta_) + ", n=" +
          std::to_string(distances.rows()) + ")");
    nugget = next;
  }
  nugget_ = nugget;
  const ProfiledParams p = profile_params(chol, train_y_);
  if (!p.ok) throw std::runtime_error("kriging: profiled parameters not finite");
  chol_lower_ = chol;
  mu_ = p.mu;
  sigma2_ = std::max(p.sigma2, 0.0);
  alpha_ = p.alpha;
}

KrigingModel KrigingModel::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               DistanceKind kind, const KrigingOptions& options) {
  if (x.rows() < 2) throw std::invalid_argument("kriging: need at least 2 samples");
  if (y.size() != x.rows())
    throw std::invalid_argument("kriging: observation count mismatch");
  if (!y.allFinite()) throw std::invalid_argument("kriging: non-finite observations");

  KrigingModel model;
  model.train_x_ = x;
  model.train_y_ = y;
  model.kind_ = kind;

  // Constant observations: the process variance is zero and the predictor
  // is the constant itself; no kernel parameters to estimate.
  if ((y.array() - y[0]).abs().maxCoeff() == 0.0) {
    model.constant_y_ = true;
    model.mu_ = y[0];
    model.sigma2_ = 0.0;
    model.theta_ = 1.0;
    model.nugget_ = options.optimize_nugget ? 0.0 : options.fixed_nugget;
    model.alpha_ = Eigen::VectorXd::Zero(y.size());
    return model;
  }

  Eigen::MatrixXd distances_local;
  const Eigen::MatrixXd* distances = options.train_distances;
  if (distances == nullptr) {
    distances_local = manhattan_distance_matrix(x);
    distances = &distances_local;
  } else if (distances->rows() != x.rows() || distances->cols() != x.rows()) {
    throw std::invalid_argument("kriging: precomputed distance matrix shape mismatch");
  }

  int evaluations = 0;
  const auto objective = [&](const std::vector<double>& params) {
    ++evaluations;
    const double theta = std::pow(10.0, params[0]);
    const double nugget =
        options.optimize_nugget ? std::pow(10.0, params[1]) : options.fixed_nugget;
    return kriging_negative_log_likelihood(*distances, y, theta, nugget);
  };

  std::vector<double> lower = {options.log10_theta_lo};
  std::vector<double> upper = {options.log10_theta_hi};
  if (options.optimize_nugget) {
    lower.push_back(options.log10_nugget_lo);
    upper.push_back(options.log10_nugget_hi);
  } else if (options.use_grid_fallback) {
    // The grid fallback only handles 2-D boxes; pad with a dead axis the
    // objective ignores.
    lower.push_back(-1.0);
    upper.push_back(1.0);
  }

  DirectOptions direct_options;
  direct_options.max_evaluations = options.mle_budget;
  direct_options.ftol_rel = options.ftol_rel;
  const MinimizeResult best =
      options.use_grid_fallback
          ? grid_golden_minimize(objective, lower, upper, options.mle_budget)
          : direct_minimize(objective, lower, upper, direct_options);

  model.theta_ = std::pow(10.0, best.x[0]);
  model.nugget_ = options.optimize_nugget ? std::pow(10.0, best.x[1]) : options.fixed_nugget;
  model.likelihood_evaluations_ = evaluations;
  model.factorize(*distances);
  return model;
}

KrigingModel KrigingModel::fit_with_params(const Eigen::MatrixXd& x,
                                           const Eigen::VectorXd& y, DistanceKind kind,
                                           double theta, double nugget) {
  if (x.rows() < 2) throw std::invalid_argument("kriging: need at least 2 samples");
  if (y.size() != x.rows())
    throw std::invalid_argument("kriging: observation count mismatch");
  if (!y.allFinite()) throw std::invalid_argument("kriging: non-finite observations");
  if (theta <= 0.0) throw std::invalid_argument("kriging: theta must be positive");
  if (nugget < 0.0) throw std::invalid_argument("kriging: nugget must be >= 0");

  KrigingModel model;
  model.train_x_ = x;
  model.train_y_ = y;
  model.kind_ = kind;
  model.theta_ = theta;
  model.nugget_ = nugget;
  model.factorize(manhattan_distance_matrix(x));
  return model;
}

Prediction KrigingModel::predict(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != train_x_.cols())
    throw std::invalid_argument("kriging predict: feature dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(train_x_.cols()) + ")");
  if (constant_y_) return {mu_, 0.0};

  const Eigen::Index n = train_x_.rows();
  Eigen::VectorXd correlations(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double distance = 0.0;
    for (Eigen::Index c = 0; c < train_x_.cols(); ++c)
      distance += std::abs(train_x_(i, c) - x[static_cast<std::size_t>(c)]);
    correlations[i] = exp_kernel(distance, theta_);
  }

  Prediction out;
  out.mean = mu_ + correlations.dot(alpha_);
  const Eigen::VectorXd v =
      chol_lower_.triangularView<Eigen::Lower>().solve(correlations);
  out.variance = std::max(sigma2_ * (1.0 - v.squaredNorm()), 0.0);
  return out;
}

std::uint64_t matrix_hash(const Eigen::MatrixXd& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const std::string cell = csv::format_double(m(i, j));
      h = fnv1a64_bytes(cell.data(), cell.size(), h);
    }
  return h;
}

nlohmann::json KrigingModel::to_json() const {
  return nlohmann::json{{"schema", "qds.model.kriging.v1"},
                        {"distance", qds::to_string(kind_)},
                        {"theta", theta_},
                        {"nugget", nugget_},
                        {"mu", mu_},
                        {"sigma2", sigma2_},
                        {"constant_y", constant_y_},
                        {"n", train_x_.rows()},
                        {"dim", train_x_.cols()},
                        {"train_hash", matrix_hash(train_x_)}};
}

KrigingModel KrigingModel::from_json(const nlohmann::json& j, const Eigen::MatrixXd& x,
                                     const Eigen::VectorXd& y) {
  if (j.at("schema").get<std::string>() != "qds.model.kriging.v1")
    throw std::runtime_error("kriging: unknown model schema");
  if (j.at("train_hash").get<std::uint64_t>() != matrix_hash(x))
    throw std::runtime_error("kriging: training data hash mismatch");
  if (j.at("constant_y").get<bool>()) {
    KrigingModel model;
    model.train_x_ = x;
    model.train_y_ = y;
    model.kind_ = distance_kind_from_string(j.at("distance").get<std::string>());
    model.constant_y_ = true;
    model.mu_ = j.at("mu").get<double>();
    model.theta_ = j.at("theta").get<double>();
    model.nugget_ = j.at("nugget").get<double>();
    model.alpha_ = Eigen::VectorXd::Zero(y.size());
    return model;
  }
  return fit_with_params(x, y, distance_kind_from_string(j.at("distance").get<std::string>()),
                         j.at("theta").get<double>(), j.at("nugget").get<double>());
}

}  // namespace qds
