#include "eventrail/linear_model.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "eventrail/error.hpp"

namespace eventrail {

double LinearModel::predict(std::span<const double> x) const {
  if (x.size() != coefficients.size()) {
    throw Error(ErrorCode::LengthMismatch, "regressor count does not match the model");
  }
  double y = intercept;
  for (std::size_t j = 0; j < x.size(); ++j) y += coefficients[j] * x[j];
  return y;
}

nlohmann::json LinearModel::to_json() const {
  return {{"features", features}, {"intercept", intercept}, {"coefficients", coefficients}};
}

LinearModel LinearModel::from_json(const nlohmann::json& doc) {
  LinearModel m;
  m.features = doc.at("features").get<std::vector<std::string>>();
  m.intercept = doc.at("intercept").get<double>();
  m.coefficients = doc.at("coefficients").get<std::vector<double>>();
  if (m.features.size() != m.coefficients.size()) {
    throw Error(ErrorCode::BadField, "linear model feature/coefficient count mismatch");
  }
  return m;
}

LinearModel fit_ols(const std::vector<std::vector<double>>& x, std::span<const double> y,
                    std::vector<std::string> features) {
  const auto n = static_cast<Eigen::Index>(y.size());
  const auto k = static_cast<Eigen::Index>(features.size());
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "x and y differ in length");
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "least squares needs at least two rows");

  // Column 0 is the intercept. Columns are scaled to unit max-norm so the
  // rank threshold does not depend on units (attendance is ~1e4).
  Eigen::MatrixXd a(n, k + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(x[i].size()) != k) {
      throw Error(ErrorCode::LengthMismatch, "row has the wrong number of regressors");
    }
    a(i, 0) = 1.0;
    for (Eigen::Index j = 0; j < k; ++j) a(i, j + 1) = x[i][j];
  }
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(k + 1);
  for (Eigen::Index j = 1; j <= k; ++j) {
    const double m = a.col(j).cwiseAbs().maxCoeff();
    if (m > 0.0) scale(j) = m;
    a.col(j) /= scale(j);
  }
  const Eigen::Map<const Eigen::VectorXd> b(y.data(), n);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < k + 1) {
    throw Error(ErrorCode::RankDeficient, "design matrix rank " + std::to_string(qr.rank()) +
                                              " < " + std::to_string(k + 1));
  }
  const Eigen::VectorXd beta = qr.solve(b);

  LinearModel model;
  model.features = std::move(features);
  model.intercept = beta(0);
  for (Eigen::Index j = 1; j <= k; ++j) model.coefficients.push_back(beta(j) / scale(j));
  for (double c : model.coefficients) {
    if (!std::isfinite(c)) throw Error(ErrorCode::RankDeficient, "non-finite coefficient");
  }
  return model;
}

}  // namespace eventrail
