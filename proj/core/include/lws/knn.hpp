#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lws/segmentation.hpp"
#include "lws/trace.hpp"

namespace lws {

enum class Metric { Euclidean, Manhattan };

Metric metric_from_name(const std::string& name);
std::string metric_name(Metric m);

/// Lazy learner: the training vectors are stored verbatim.
struct KnnModel {
  std::vector<std::vector<double>> training;
  std::vector<GestureLabel> labels;
  int k = 5;
  Metric metric = Metric::Euclidean;

  std::size_t dim() const { return training.empty() ? 0 : training.front().size(); }
};

struct Prediction {
  GestureLabel label = GestureLabel::A;
  /// Labels of the k nearest neighbors, closest first.
  std::vector<GestureLabel> neighbor_labels;
  /// Per-class votes among the k neighbors; sums to k.
  std::array<int, kNumGestures> vote_counts{};
};

/// Validates k and vector lengths; every training vector must be labeled.
KnnModel fit(const std::vector<FeatureVector>& training, int k, Metric metric);

/// Exact brute-force k-nearest search with fully deterministic tie rules:
/// equal distances prefer the lower training index; vote ties prefer the
/// class with the smaller summed neighbor distance, then the lower ordinal.
Prediction predict(const KnnModel& model, std::span<const double> query);

std::vector<Prediction> predict_batch(const KnnModel& model,
                                      const std::vector<FeatureVector>& queries);

/// JSON round-trip of the model (k, metric, training vectors + labels).
void save_model(const KnnModel& model, const std::filesystem::path& path);
KnnModel load_model(const std::filesystem::path& path);

}  // namespace lws
