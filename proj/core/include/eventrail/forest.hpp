#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace eventrail {

struct ForestParams {
  int trees = 1500;
  int mtry = 0;  // 0: max(1, floor(p / 3))
  int min_leaf = 5;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0.0;  // x <= threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf mean
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<std::uint32_t> oob;  // rows not drawn into the bootstrap

  double predict(std::span<const double> x) const;
};

struct Forest {
  std::vector<RegressionTree> trees;
  int mtry = 1;
  int min_leaf = 5;
  std::size_t n_features = 0;

  // Exact mean of the tree predictions.
  double predict(std::span<const double> x) const;
  nlohmann::json to_json() const;
  static Forest from_json(const nlohmann::json& doc);
};

// CART regression trees grown to min_leaf on bootstrap samples. At every node
// mtry features are drawn without replacement; the split with the largest
// squared-error reduction wins, ties going to the lowest feature index and
// then the lowest threshold. Thresholds are midpoints between adjacent
// distinct values. Tree b draws from the stream (seed, b).
Forest fit_forest(const std::vector<std::vector<double>>& x, std::span<const double> y,
                  const ForestParams& params = {});

// Out-of-bag mean squared error over rows that are out of bag for at least
// one tree; NaN when no row is.
double oob_mse(const Forest& forest, const std::vector<std::vector<double>>& x,
               std::span<const double> y);

// %IncMSE per column group. For each tree the group's columns are permuted
// jointly among that tree's OOB rows; the increase in OOB MSE is averaged
// over trees and divided by its standard deviation (0 when that is 0).
struct ColumnGroup {
  std::string name;
  std::vector<std::size_t> columns;
};
std::vector<double> permutation_importance(const Forest& forest,
                                           const std::vector<std::vector<double>>& x,
                                           std::span<const double> y,
                                           std::span<const ColumnGroup> groups,
                                           std::uint64_t seed);

}  // namespace eventrail
