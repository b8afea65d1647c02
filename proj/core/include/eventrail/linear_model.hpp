#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace eventrail {

struct LinearModel {
  std::vector<std::string> features;
  double intercept = 0.0;
  std::vector<double> coefficients;

  double predict(std::span<const double> x) const;
  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& doc);
};

// Ordinary least squares with an intercept, via column-pivoted QR.
// x[i] holds the regressors of row i in `features` order. Throws
// InvalidArgument for fewer than two rows and RankDeficient when the design
// matrix (intercept included) is not of full column rank.
LinearModel fit_ols(const std::vector<std::vector<double>>& x, std::span<const double> y,
                    std::vector<std::string> features);

}  // namespace eventrail
