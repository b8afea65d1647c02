#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eventrail/features.hpp"
#include "eventrail/forest.hpp"
#include "eventrail/linear_model.hpp"

namespace eventrail {

enum class ModelKind { Linear, Forest, LrRf, Mean };

const char* to_string(ModelKind k);
ModelKind parse_model_kind(std::string_view text);

struct ModelSpec {
  ModelKind kind = ModelKind::LrRf;
  Target target = Target::PostEvent;
  std::vector<std::string> linear_features{"attendance"};
  ForestParams forest;  // trees default to 1500 for Forest, 800 for LrRf

  static ModelSpec defaults(ModelKind kind);
};

// Linear part, residual forest part, or both. A Mean model predicts the
// training mean and exists as a baseline.
struct FittedModel {
  ModelKind kind = ModelKind::LrRf;
  Target target = Target::PostEvent;
  FeatureEncoder encoder;
  std::optional<LinearModel> linear;
  std::optional<Forest> forest;
  double mean = 0.0;

  double predict(const FeatureRow& row) const;
  nlohmann::json to_json() const;
  static FittedModel from_json(const nlohmann::json& doc);
  void save(const std::filesystem::path& path) const;
  static FittedModel load(const std::filesystem::path& path);
};

LinearModel fit_linear(std::span<const FeatureRow> rows, Target target,
                       const std::vector<std::string>& features = {"attendance"});
FittedModel fit_model(std::span<const FeatureRow> rows, const ModelSpec& spec);

struct MetricsReport {
  double mae = 0.0;
  double mape = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  std::size_t n = 0;
  std::size_t mape_excluded = 0;  // rows with a zero target
  std::vector<std::size_t> failed_folds;
  std::vector<double> predictions;  // NaN for failed folds
};

MetricsReport score(std::span<const double> actual, std::span<const double> predicted);

// Fold i fits on every other row; forests in fold i use seed
// derive_seed(spec.forest.seed, i). Folds whose fit throws are reported and
// left out of the metrics. Throws InvalidArgument for fewer than three rows.
MetricsReport loocv(std::span<const FeatureRow> rows, const ModelSpec& spec);

struct Importance {
  std::string feature;
  double inc_mse = 0.0;
};

// %IncMSE for every attribute group of a forest fitted on `rows`.
std::vector<Importance> feature_importance(std::span<const FeatureRow> rows,
                                           const FittedModel& model, std::uint64_t seed);

nlohmann::json metrics_report(const MetricsReport& m, const ModelSpec& spec);
void write_importance_csv(std::ostream& out, std::span<const Importance> imp);

}  // namespace eventrail
