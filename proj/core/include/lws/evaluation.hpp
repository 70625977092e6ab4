#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lws/knn.hpp"
#include "lws/segmentation.hpp"
#include "lws/trace.hpp"
#include "lws/wavelet.hpp"

namespace lws {

/// Per-sample fold assignment for K-fold cross-validation.
struct FoldPlan {
  std::vector<int> assignments;  // fold index in 0..K-1 per dataset position
  int num_folds = 0;
  std::uint64_t seed = 0;
  bool stratified = true;
};

/// Row-stochastic 8x8 matrix: rows indexed by performed gesture, columns by
/// estimated gesture.
struct ConfusionMatrix {
  std::array<std::array<double, kNumGestures>, kNumGestures> rows{};

  /// True when every row sums to 1 within tol. Rows of classes that were
  /// never tested stay all-zero and fail this check.
  bool rows_stochastic(double tol = 1e-6) const;
};

struct EvalReport {
  ConfusionMatrix mean_confusion;
  std::vector<double> per_fold_accuracy;
  double mean_accuracy = 0.0;
  double accuracy_sd = 0.0;  // sample SD over the fold accuracies
  std::size_t excluded_traces = 0;
  int num_folds = 0;
  std::uint64_t fold_seed = 0;
  /// Present when the dataset is homogeneous in these conditions.
  std::optional<double> distance_cm;
  std::optional<bool> ambient_on;
};

struct PipelineConfig {
  DenoiseConfig denoise;
  SegmentConfig segment;
};

struct KnnConfig {
  int k = 5;
  Metric metric = Metric::Euclidean;
};

enum class ReportFormat { Text, Csv, Json };

ReportFormat report_format_from_name(const std::string& name);

/// Seeded fold assignment, deterministic given (dataset order, K, seed).
/// Stratified mode balances every class across folds (sizes differ by at
/// most 1 per class) and requires each class to hold at least K samples.
FoldPlan make_folds(const Dataset& ds, int num_folds, std::uint64_t seed,
                    bool stratified);

/// Runs the full protocol: preprocess every trace independently, then train
/// on K-1 folds and test on the held-out fold, K times. Traces that fail
/// preprocessing are excluded and counted. Per-fold confusion matrices are
/// row-normalized and averaged element-wise.
EvalReport cross_validate(const Dataset& ds, const PipelineConfig& pipeline_cfg,
                          const KnnConfig& knn_cfg, const FoldPlan& fold_plan);

/// Text prints the 8x8 matrix (two decimals) plus the accuracy summary;
/// csv/json are machine-readable and carry per-fold accuracies, mean, SD
/// and the excluded-trace count.
std::string render_report(const EvalReport& report, ReportFormat format);

/// Inverse of render_report for the json format.
EvalReport parse_report_json(const std::string& text);

}  // namespace lws
