#include "lws/knn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "lws/dataset_io.hpp"

namespace lws {
namespace {

double distance(std::span<const double> a, std::span<const double> b,
                Metric metric) {
  double acc = 0.0;
  if (metric == Metric::Euclidean) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
    return std::sqrt(acc);
  }
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
  return acc;
}

}  // namespace

Metric metric_from_name(const std::string& name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "manhattan") return Metric::Manhattan;
  throw Error("unknown metric '" + name +
              "' (expected euclidean or manhattan)");
}

std::string metric_name(Metric m) {
  return m == Metric::Euclidean ? "euclidean" : "manhattan";
}

KnnModel fit(const std::vector<FeatureVector>& training, int k, Metric metric) {
  if (training.empty()) throw Error("empty training set");
  if (k < 1 || static_cast<std::size_t>(k) > training.size()) {
    throw Error("k=" + std::to_string(k) + " out of range 1.." +
                std::to_string(training.size()));
  }
  const std::size_t dim = training.front().values.size();
  KnnModel model;
  model.k = k;
  model.metric = metric;
  model.training.reserve(training.size());
  model.labels.reserve(training.size());
  for (std::size_t i = 0; i < training.size(); ++i) {
    const FeatureVector& fv = training[i];
    if (fv.values.size() != dim) {
      throw Error("training vector " + std::to_string(i) + " has length " +
                  std::to_string(fv.values.size()) + ", expected " +
                  std::to_string(dim));
    }
    if (!fv.label.has_value()) {
      throw Error("training vector " + std::to_string(i) + " is unlabeled");
    }
    model.training.push_back(fv.values);
    model.labels.push_back(*fv.label);
  }
  return model;
}

Prediction predict(const KnnModel& model, std::span<const double> query) {
  if (query.size() != model.dim()) {
    throw Error("query length " + std::to_string(query.size()) +
                " does not match training length " +
                std::to_string(model.dim()));
  }
  const std::size_t n = model.training.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = distance(query, model.training[i], model.metric);
  }
  const std::size_t k = static_cast<std::size_t>(model.k);
  // distance ties resolve to the lower training index
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (dist[a] != dist[b]) return dist[a] < dist[b];
                      return a < b;
                    });

  Prediction pred;
  pred.neighbor_labels.reserve(k);
  std::array<double, kNumGestures> class_dist_sum{};
  for (std::size_t i = 0; i < k; ++i) {
    const GestureLabel label = model.labels[order[i]];
    pred.neighbor_labels.push_back(label);
    pred.vote_counts[static_cast<std::size_t>(label)] += 1;
    class_dist_sum[static_cast<std::size_t>(label)] += dist[order[i]];
  }

  int best = -1;
  for (int c = 0; c < kNumGestures; ++c) {
    if (pred.vote_counts[static_cast<std::size_t>(c)] == 0) continue;
    if (best < 0) {
      best = c;
      continue;
    }
    const int vc = pred.vote_counts[static_cast<std::size_t>(c)];
    const int vb = pred.vote_counts[static_cast<std::size_t>(best)];
    if (vc > vb ||
        (vc == vb && class_dist_sum[static_cast<std::size_t>(c)] <
                         class_dist_sum[static_cast<std::size_t>(best)])) {
      best = c;
    }
    // remaining ties keep the lower ordinal, i.e. the incumbent
  }
  pred.label = label_from_ordinal(best);
  return pred;
}

std::vector<Prediction> predict_batch(const KnnModel& model,
                                      const std::vector<FeatureVector>& queries) {
  std::vector<Prediction> out;
  out.reserve(queries.size());
  for (const FeatureVector& q : queries) out.push_back(predict(model, q.values));
  return out;
}

void save_model(const KnnModel& model, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["k"] = model.k;
  doc["metric"] = metric_name(model.metric);
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < model.training.size(); ++i) {
    entries.push_back(
        {{"label", std::string(1, label_to_char(model.labels[i]))},
         {"values", model.training[i]}});
  }
  doc["training"] = std::move(entries);
  write_file_atomic(path, doc.dump(2) + "\n");
}

KnnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
    KnnModel model;
    model.k = doc.at("k").get<int>();
    model.metric = metric_from_name(doc.at("metric").get<std::string>());
    for (const auto& entry : doc.at("training")) {
      const std::string label = entry.at("label").get<std::string>();
      if (label.size() != 1) throw Error("bad label '" + label + "'");
      model.labels.push_back(label_from_char(label[0]));
      model.training.push_back(entry.at("values").get<std::vector<double>>());
    }
    if (model.training.empty()) throw Error("model has no training vectors");
    if (model.k < 1 ||
        static_cast<std::size_t>(model.k) > model.training.size()) {
      throw Error("model k out of range");
    }
    for (const auto& v : model.training) {
      if (v.size() != model.dim()) {
        throw Error("model training vectors have mixed lengths");
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace lws
