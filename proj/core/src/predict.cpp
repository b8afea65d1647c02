#include "eventrail/predict.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "eventrail/error.hpp"
#include "eventrail/rng.hpp"

namespace eventrail {

const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Linear: return "lr";
    case ModelKind::Forest: return "rf";
    case ModelKind::LrRf: return "lr_rf";
    case ModelKind::Mean: return "mean";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "lr" || text == "linear") return ModelKind::Linear;
  if (text == "rf" || text == "forest") return ModelKind::Forest;
  if (text == "lr_rf" || text == "lr+rf") return ModelKind::LrRf;
  if (text == "mean") return ModelKind::Mean;
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(text) + "'");
}

ModelSpec ModelSpec::defaults(ModelKind kind) {
  ModelSpec s;
  s.kind = kind;
  s.forest.trees = kind == ModelKind::LrRf ? 800 : 1500;
  return s;
}

namespace {

std::vector<double> targets(std::span<const FeatureRow> rows, Target t) {
  std::vector<double> y;
  y.reserve(rows.size());
  for (const auto& r : rows) y.push_back(target_value(r, t));
  return y;
}

std::vector<double> linear_inputs(const FeatureRow& row, const LinearModel& m) {
  std::vector<double> x;
  for (const auto& f : m.features) x.push_back(numeric_feature(row, f));
  return x;
}

}  // namespace

double FittedModel::predict(const FeatureRow& row) const {
  double y = kind == ModelKind::Mean ? mean : 0.0;
  if (linear) y += linear->predict(linear_inputs(row, *linear));
  if (forest) y += forest->predict(encoder.transform(row));
  return y;
}

LinearModel fit_linear(std::span<const FeatureRow> rows, Target target,
                       const std::vector<std::string>& features) {
  std::vector<std::vector<double>> x;
  for (const auto& r : rows) {
    std::vector<double> xi;
    for (const auto& f : features) xi.push_back(numeric_feature(r, f));
    x.push_back(std::move(xi));
  }
  return fit_ols(x, targets(rows, target), features);
}

FittedModel fit_model(std::span<const FeatureRow> rows, const ModelSpec& spec) {
  if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "no rows to fit");
  FittedModel m;
  m.kind = spec.kind;
  m.target = spec.target;
  std::vector<double> y = targets(rows, spec.target);
  if (spec.kind == ModelKind::Mean) {
    double s = 0.0;
    for (double v : y) s += v;
    m.mean = s / static_cast<double>(y.size());
    return m;
  }
  if (spec.kind == ModelKind::Linear || spec.kind == ModelKind::LrRf) {
    m.linear = fit_linear(rows, spec.target, spec.linear_features);
  }
  if (spec.kind == ModelKind::Forest || spec.kind == ModelKind::LrRf) {
    if (m.linear) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        y[i] -= m.linear->predict(linear_inputs(rows[i], *m.linear));
      }
    }
    m.encoder = FeatureEncoder::fit(rows);
    m.forest = fit_forest(m.encoder.transform(rows), y, spec.forest);
  }
  return m;
}

nlohmann::json FittedModel::to_json() const {
  nlohmann::json doc{{"format_version", 1},
                     {"kind", eventrail::to_string(kind)},
                     {"target", eventrail::to_string(target)},
                     {"mean", mean}};
  if (linear) doc["linear"] = linear->to_json();
  if (forest) {
    doc["encoder"] = encoder.to_json();
    doc["forest"] = forest->to_json();
  }
  return doc;
}

FittedModel FittedModel::from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format_version").get<int>() != 1) {
      throw Error(ErrorCode::BadField, "unsupported model format_version");
    }
    FittedModel m;
    m.kind = parse_model_kind(doc.at("kind").get<std::string>());
    m.target = parse_target(doc.at("target").get<std::string>());
    m.mean = doc.value("mean", 0.0);
    if (doc.contains("linear")) m.linear = LinearModel::from_json(doc.at("linear"));
    if (doc.contains("forest")) {
      m.encoder = FeatureEncoder::from_json(doc.at("encoder"));
      m.forest = Forest::from_json(doc.at("forest"));
      if (m.forest->n_features != m.encoder.width()) {
        throw Error(ErrorCode::BadField, "forest width does not match the encoder");
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadField, std::string("malformed model: ") + e.what());
  }
}

void FittedModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << to_json().dump() << '\n';
}

FittedModel FittedModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadField, path.string() + ": " + e.what());
  }
  return from_json(doc);
}

MetricsReport score(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) {
    throw Error(ErrorCode::LengthMismatch, "actual and predicted differ in length");
  }
  MetricsReport m;
  std::size_t mape_n = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (std::isnan(predicted[i])) continue;
    const double e = actual[i] - predicted[i];
    m.mae += std::abs(e);
    m.mse += e * e;
    ++m.n;
    if (actual[i] == 0.0) {
      ++m.mape_excluded;
    } else {
      m.mape += std::abs(e) / std::abs(actual[i]);
      ++mape_n;
    }
  }
  if (m.n > 0) {
    m.mae /= static_cast<double>(m.n);
    m.mse /= static_cast<double>(m.n);
  }
  if (mape_n > 0) m.mape /= static_cast<double>(mape_n);
  m.rmse = std::sqrt(m.mse);
  return m;
}

MetricsReport loocv(std::span<const FeatureRow> rows, const ModelSpec& spec) {
  if (rows.size() < 3) throw Error(ErrorCode::InvalidArgument, "LOOCV needs at least three rows");
  std::vector<double> predicted(rows.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::size_t> failed;
  std::vector<FeatureRow> train;
  train.reserve(rows.size() - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    train.clear();
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j != i) train.push_back(rows[j]);
    }
    ModelSpec fold = spec;
    fold.forest.seed = derive_seed(spec.forest.seed, i);
    try {
      predicted[i] = fit_model(train, fold).predict(rows[i]);
    } catch (const Error&) {
      failed.push_back(i);
    }
  }
  const auto y = targets(rows, spec.target);
  MetricsReport m = score(y, predicted);
  m.failed_folds = std::move(failed);
  m.predictions = std::move(predicted);
  return m;
}

std::vector<Importance> feature_importance(std::span<const FeatureRow> rows,
                                           const FittedModel& model, std::uint64_t seed) {
  if (!model.forest) throw Error(ErrorCode::InvalidArgument, "model has no forest");
  std::vector<double> y = targets(rows, model.target);
  if (model.linear) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      y[i] -= model.linear->predict(linear_inputs(rows[i], *model.linear));
    }
  }
  std::vector<ColumnGroup> groups;
  for (const auto& g : model.encoder.groups()) {
    ColumnGroup cg{g.name, {}};
    for (std::size_t c = 0; c < g.width; ++c) cg.columns.push_back(g.first_column + c);
    groups.push_back(std::move(cg));
  }
  const auto scores =
      permutation_importance(*model.forest, model.encoder.transform(rows), y, groups, seed);
  std::vector<Importance> out;
  for (std::size_t g = 0; g < groups.size(); ++g) out.push_back({groups[g].name, scores[g]});
  return out;
}

nlohmann::json metrics_report(const MetricsReport& m, const ModelSpec& spec) {
  return {{"report_version", 1},
          {"model", to_string(spec.kind)},
          {"target", to_string(spec.target)},
          {"trees", spec.forest.trees},
          {"seed", spec.forest.seed},
          {"n", m.n},
          {"mae", m.mae},
          {"mape", m.mape},
          {"mse", m.mse},
          {"rmse", m.rmse},
          {"mape_excluded", m.mape_excluded},
          {"failed_folds", m.failed_folds}};
}

void write_importance_csv(std::ostream& out, std::span<const Importance> imp) {
  out << "feature,inc_mse\n";
  for (const auto& i : imp) out << i.feature << ',' << i.inc_mse << '\n';
}

}  // namespace eventrail
