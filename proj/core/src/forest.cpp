#include "eventrail/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "eventrail/error.hpp"
#include "eventrail/rng.hpp"
#include "eventrail/stats.hpp"

namespace eventrail {

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                          : n.right);
  }
  return nodes[i].value;
}

double Forest::predict(std::span<const double> x) const {
  if (trees.empty()) throw Error(ErrorCode::InvalidArgument, "forest has no trees");
  double sum = 0.0;
  for (const auto& t : trees) sum += t.predict(x);
  return sum / static_cast<double>(trees.size());
}

nlohmann::json Forest::to_json() const {
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& t : trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
      nodes.push_back(nlohmann::json::array({n.feature, n.threshold, n.left, n.right, n.value}));
    }
    ts.push_back({{"nodes", std::move(nodes)}, {"oob", t.oob}});
  }
  return {{"mtry", mtry}, {"min_leaf", min_leaf}, {"n_features", n_features},
          {"trees", std::move(ts)}};
}

Forest Forest::from_json(const nlohmann::json& doc) {
  Forest f;
  f.mtry = doc.at("mtry").get<int>();
  f.min_leaf = doc.at("min_leaf").get<int>();
  f.n_features = doc.at("n_features").get<std::size_t>();
  for (const auto& tj : doc.at("trees")) {
    RegressionTree t;
    for (const auto& nj : tj.at("nodes")) {
      t.nodes.push_back({nj.at(0).get<int>(), nj.at(1).get<double>(), nj.at(2).get<int>(),
                         nj.at(3).get<int>(), nj.at(4).get<double>()});
    }
    t.oob = tj.at("oob").get<std::vector<std::uint32_t>>();
    const auto n = static_cast<int>(t.nodes.size());
    for (const auto& node : t.nodes) {
      if (node.feature >= 0 &&
          (node.left < 0 || node.left >= n || node.right < 0 || node.right >= n ||
           static_cast<std::size_t>(node.feature) >= f.n_features)) {
        throw Error(ErrorCode::BadField, "malformed tree node");
      }
    }
    if (t.nodes.empty()) throw Error(ErrorCode::BadField, "empty tree");
    f.trees.push_back(std::move(t));
  }
  return f;
}

namespace {

struct Split {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

bool better(const Split& a, const Split& b) {
  if (a.gain != b.gain) return a.gain > b.gain;
  if (a.feature != b.feature) return a.feature < b.feature;
  return a.threshold < b.threshold;
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& x, std::span<const double> y, int mtry,
              int min_leaf, Rng& rng)
      : x_(x), y_(y), mtry_(mtry), min_leaf_(static_cast<std::size_t>(min_leaf)), rng_(rng) {
    features_.resize(x.empty() ? 0 : x[0].size());
    std::iota(features_.begin(), features_.end(), 0);
  }

  RegressionTree build(std::vector<std::uint32_t> rows) {
    RegressionTree tree;
    nodes_ = &tree.nodes;
    grow(std::move(rows));
    return tree;
  }

 private:
  int grow(std::vector<std::uint32_t> rows) {
    const int id = static_cast<int>(nodes_->size());
    nodes_->emplace_back();
    double sum = 0.0;
    for (auto r : rows) sum += y_[r];
    const double mean = sum / static_cast<double>(rows.size());
    (*nodes_)[static_cast<std::size_t>(id)].value = mean;

    if (rows.size() < 2 * min_leaf_) return id;
    const Split split = best_split(rows, sum);
    if (split.feature < 0) return id;

    std::vector<std::uint32_t> left, right;
    for (auto r : rows) {
      (x_[r][static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(left));
    const int r = grow(std::move(right));
    TreeNode& node = (*nodes_)[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  Split best_split(const std::vector<std::uint32_t>& rows, double total) {
    // Partial Fisher-Yates draws mtry distinct features.
    const std::size_t p = features_.size();
    const std::size_t m = std::min(p, static_cast<std::size_t>(mtry_));
    for (std::size_t k = 0; k < m; ++k) {
      const auto j = static_cast<std::size_t>(rng_.uniform_int(static_cast<std::int64_t>(k),
                                                               static_cast<std::int64_t>(p - 1)));
      std::swap(features_[k], features_[j]);
    }
    const std::size_t n = rows.size();
    const double parent = total * total / static_cast<double>(n);
    Split best;
    std::vector<std::pair<double, double>> xy(n);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t f = features_[k];
      for (std::size_t i = 0; i < n; ++i) xy[i] = {x_[rows[i]][f], y_[rows[i]]};
      // Sorting on (x, y) fixes the summation order whatever the row order.
      std::sort(xy.begin(), xy.end());
      if (xy.front().first == xy.back().first) continue;
      double left_sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += xy[i].second;
        const std::size_t nl = i + 1;
        if (xy[i].first == xy[i + 1].first) continue;
        if (nl < min_leaf_ || n - nl < min_leaf_) continue;
        const double right_sum = total - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(nl) +
                            right_sum * right_sum / static_cast<double>(n - nl) - parent;
        const Split cand{gain, static_cast<int>(f), 0.5 * (xy[i].first + xy[i + 1].first)};
        if (gain > 1e-12 * std::max(1.0, std::abs(parent)) && (best.feature < 0 || better(cand, best))) {
          best = cand;
        }
      }
    }
    return best;
  }

  const std::vector<std::vector<double>>& x_;
  std::span<const double> y_;
  int mtry_;
  std::size_t min_leaf_;
  Rng& rng_;
  std::vector<std::size_t> features_;
  std::vector<TreeNode>* nodes_ = nullptr;
};

double tree_mse(const RegressionTree& t, const std::vector<std::vector<double>>& x,
                std::span<const double> y) {
  double s = 0.0;
  for (auto r : t.oob) {
    const double e = y[r] - t.predict(x[r]);
    s += e * e;
  }
  return s / static_cast<double>(t.oob.size());
}

}  // namespace

Forest fit_forest(const std::vector<std::vector<double>>& x, std::span<const double> y,
                  const ForestParams& params) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "x and y differ in length");
  if (x.empty()) throw Error(ErrorCode::InvalidArgument, "forest needs rows");
  if (params.trees < 1 || params.min_leaf < 1) {
    throw Error(ErrorCode::InvalidArgument, "trees and min_leaf must be positive");
  }
  const std::size_t p = x[0].size();
  for (const auto& row : x) {
    if (row.size() != p) throw Error(ErrorCode::LengthMismatch, "ragged feature matrix");
  }
  Forest forest;
  forest.n_features = p;
  forest.min_leaf = params.min_leaf;
  forest.mtry = params.mtry > 0 ? params.mtry : std::max(1, static_cast<int>(p / 3));
  const auto n = static_cast<std::uint32_t>(x.size());
  for (int b = 0; b < params.trees; ++b) {
    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(b)));
    std::vector<std::uint32_t> rows(n);
    std::vector<bool> drawn(n, !params.bootstrap);
    if (params.bootstrap) {
      for (auto& r : rows) {
        r = static_cast<std::uint32_t>(rng.uniform_int(0, n - 1));
        drawn[r] = true;
      }
    } else {
      std::iota(rows.begin(), rows.end(), 0u);
    }
    TreeBuilder builder(x, y, forest.mtry, params.min_leaf, rng);
    RegressionTree tree = builder.build(std::move(rows));
    for (std::uint32_t r = 0; r < n; ++r) {
      if (!drawn[r]) tree.oob.push_back(r);
    }
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

double oob_mse(const Forest& forest, const std::vector<std::vector<double>>& x,
               std::span<const double> y) {
  std::vector<double> sum(x.size(), 0.0);
  std::vector<int> count(x.size(), 0);
  for (const auto& t : forest.trees) {
    for (auto r : t.oob) {
      sum[r] += t.predict(x[r]);
      ++count[r];
    }
  }
  double se = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (count[i] == 0) continue;
    const double e = y[i] - sum[i] / count[i];
    se += e * e;
    ++used;
  }
  return used == 0 ? std::numeric_limits<double>::quiet_NaN() : se / static_cast<double>(used);
}

std::vector<double> permutation_importance(const Forest& forest,
                                           const std::vector<std::vector<double>>& x,
                                           std::span<const double> y,
                                           std::span<const ColumnGroup> groups,
                                           std::uint64_t seed) {
  std::vector<std::vector<double>> diffs(groups.size());
  std::vector<std::vector<double>> scratch;
  for (std::size_t t = 0; t < forest.trees.size(); ++t) {
    const RegressionTree& tree = forest.trees[t];
    if (tree.oob.size() < 2) continue;
    const double base = tree_mse(tree, x, y);
    Rng rng(derive_seed(seed, t));
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<std::uint32_t> perm = tree.oob;
      for (std::size_t i = perm.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
        std::swap(perm[i], perm[j]);
      }
      double se = 0.0;
      std::vector<double> row;
      for (std::size_t k = 0; k < tree.oob.size(); ++k) {
        row = x[tree.oob[k]];
        for (std::size_t c : groups[g].columns) row[c] = x[perm[k]][c];
        const double e = y[tree.oob[k]] - tree.predict(row);
        se += e * e;
      }
      diffs[g].push_back(se / static_cast<double>(tree.oob.size()) - base);
    }
  }
  std::vector<double> out(groups.size(), 0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (diffs[g].size() < 2) continue;
    const double sd = stats::stddev(diffs[g]);
    if (sd > 0.0) out[g] = stats::mean(diffs[g]) / sd;
  }
  return out;
}

}  // namespace eventrail
