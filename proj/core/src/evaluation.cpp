#include "lws/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "lws/rng.hpp"

namespace lws {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string render_text(const EvalReport& r) {
  std::ostringstream out;
  out << "Confusion matrix (rows: performed, columns: estimated)\n";
  out << "     ";
  for (int c = 0; c < kNumGestures; ++c) {
    out << "  (" << label_to_char(label_from_ordinal(c)) << ") ";
  }
  out << '\n';
  char cell[16];
  for (int p = 0; p < kNumGestures; ++p) {
    out << " (" << label_to_char(label_from_ordinal(p)) << ") ";
    for (int c = 0; c < kNumGestures; ++c) {
      std::snprintf(cell, sizeof(cell), " %.2f ",
                    r.mean_confusion.rows[static_cast<std::size_t>(p)]
                                         [static_cast<std::size_t>(c)]);
      out << cell;
    }
    out << '\n';
  }
  std::snprintf(cell, sizeof(cell), "%.2f%%", 100.0 * r.mean_accuracy);
  out << "Overall accuracy: " << cell;
  std::snprintf(cell, sizeof(cell), "%.2f%%", 100.0 * r.accuracy_sd);
  out << " (SD = " << cell << ")\n";
  out << "Folds: " << r.num_folds << ", excluded traces: " << r.excluded_traces
      << '\n';
  return out.str();
}

std::string render_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "record,row,col,value\n";
  for (int p = 0; p < kNumGestures; ++p) {
    for (int c = 0; c < kNumGestures; ++c) {
      out << "confusion," << label_to_char(label_from_ordinal(p)) << ','
          << label_to_char(label_from_ordinal(c)) << ','
          << format_double(r.mean_confusion.rows[static_cast<std::size_t>(p)]
                                                [static_cast<std::size_t>(c)])
          << '\n';
    }
  }
  for (std::size_t f = 0; f < r.per_fold_accuracy.size(); ++f) {
    out << "fold_accuracy," << f << ",," << format_double(r.per_fold_accuracy[f])
        << '\n';
  }
  out << "mean_accuracy,,," << format_double(r.mean_accuracy) << '\n';
  out << "accuracy_sd,,," << format_double(r.accuracy_sd) << '\n';
  out << "excluded_traces,,," << r.excluded_traces << '\n';
  out << "num_folds,,," << r.num_folds << '\n';
  if (r.distance_cm) {
    out << "distance_cm,,," << format_double(*r.distance_cm) << '\n';
  }
  if (r.ambient_on) out << "ambient_on,,," << (*r.ambient_on ? 1 : 0) << '\n';
  return out.str();
}

std::string render_json(const EvalReport& r) {
  nlohmann::json doc;
  doc["num_folds"] = r.num_folds;
  doc["fold_seed"] = r.fold_seed;
  doc["per_fold_accuracy"] = r.per_fold_accuracy;
  doc["mean_accuracy"] = r.mean_accuracy;
  doc["accuracy_sd"] = r.accuracy_sd;
  doc["excluded_traces"] = r.excluded_traces;
  nlohmann::json matrix = nlohmann::json::array();
  for (const auto& row : r.mean_confusion.rows) {
    matrix.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["mean_confusion"] = std::move(matrix);
  if (r.distance_cm) doc["distance_cm"] = *r.distance_cm;
  if (r.ambient_on) doc["ambient_on"] = *r.ambient_on;
  return doc.dump(2) + "\n";
}

}  // namespace

bool ConfusionMatrix::rows_stochastic(double tol) const {
  for (const auto& row : rows) {
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    if (std::fabs(sum - 1.0) > tol) return false;
  }
  return true;
}

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw Error("unknown report format '" + name +
              "' (expected text, csv or json)");
}

FoldPlan make_folds(const Dataset& ds, int num_folds, std::uint64_t seed,
                    bool stratified) {
  ds.validate();
  const std::size_t n = ds.size();
  if (num_folds < 2) {
    throw Error("need at least 2 folds, got " + std::to_string(num_folds));
  }
  if (static_cast<std::size_t>(num_folds) > n) {
    throw Error(std::to_string(num_folds) + " folds exceed the " +
                std::to_string(n) + " available traces");
  }

  FoldPlan plan;
  plan.assignments.assign(n, -1);
  plan.num_folds = num_folds;
  plan.seed = seed;
  plan.stratified = stratified;

  if (stratified) {
    for (int c = 0; c < kNumGestures; ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<int>(*ds.traces[i].label) == c) members.push_back(i);
      }
      if (members.empty()) continue;
      if (members.size() < static_cast<std::size_t>(num_folds)) {
        throw Error("class '" +
                    std::string(1, label_to_char(label_from_ordinal(c))) +
                    "' has " + std::to_string(members.size()) +
                    " samples, fewer than the " + std::to_string(num_folds) +
                    " folds required for stratification");
      }
      Rng rng(derive_stream_seed(seed, static_cast<std::uint64_t>(c)));
      shuffle(members, rng);
      // rotate remainders across folds so no fold is systematically larger
      for (std::size_t i = 0; i < members.size(); ++i) {
        plan.assignments[members[i]] =
            static_cast<int>((i + static_cast<std::size_t>(c)) %
                             static_cast<std::size_t>(num_folds));
      }
    }
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_stream_seed(seed, 0));
    shuffle(order, rng);
    for (std::size_t i = 0; i < n; ++i) {
      plan.assignments[order[i]] =
          static_cast<int>(i % static_cast<std::size_t>(num_folds));
    }
  }
  return plan;
}

EvalReport cross_validate(const Dataset& ds, const PipelineConfig& pipeline_cfg,
                          const KnnConfig& knn_cfg, const FoldPlan& fold_plan) {
  ds.validate();
  const std::size_t n = ds.size();
  if (fold_plan.assignments.size() != n) {
    throw Error("fold plan covers " +
                std::to_string(fold_plan.assignments.size()) +
                " samples but the dataset has " + std::to_string(n));
  }
  const int K = fold_plan.num_folds;

  // Preprocessing is strictly per-trace (no cross-trace statistics), so the
  // features can be computed once without leaking between folds.
  std::vector<std::optional<FeatureVector>> features(n);
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      features[i] =
          preprocess(ds.traces[i], pipeline_cfg.denoise, pipeline_cfg.segment);
    } catch (const Error&) {
      ++excluded;  // unusable trace, reported but not imputed
    }
  }

  EvalReport report;
  report.num_folds = K;
  report.fold_seed = fold_plan.seed;
  report.excluded_traces = excluded;

  std::array<std::array<double, kNumGestures>, kNumGestures> mean{};
  for (int f = 0; f < K; ++f) {
    std::vector<FeatureVector> train;
    std::vector<std::size_t> test_indices;
    for (std::size_t i = 0; i < n; ++i) {
      if (!features[i].has_value()) continue;
      if (fold_plan.assignments[i] == f) {
        test_indices.push_back(i);
      } else {
        train.push_back(*features[i]);
      }
    }
    if (train.empty()) {
      throw Error("fold " + std::to_string(f) + " leaves no training data");
    }
    const KnnModel model = fit(train, knn_cfg.k, knn_cfg.metric);

    std::array<std::array<double, kNumGestures>, kNumGestures> counts{};
    std::size_t correct = 0;
    for (std::size_t i : test_indices) {
      const Prediction pred = predict(model, features[i]->values);
      const auto performed = static_cast<std::size_t>(*ds.traces[i].label);
      const auto estimated = static_cast<std::size_t>(pred.label);
      counts[performed][estimated] += 1.0;
      if (performed == estimated) ++correct;
    }

    for (int p = 0; p < kNumGestures; ++p) {
      auto& row = counts[static_cast<std::size_t>(p)];
      const double row_sum = std::accumulate(row.begin(), row.end(), 0.0);
      if (row_sum > 0.0) {
        for (double& cell : row) cell /= row_sum;
      }
      for (int c = 0; c < kNumGestures; ++c) {
        mean[static_cast<std::size_t>(p)][static_cast<std::size_t>(c)] +=
            row[static_cast<std::size_t>(c)] / static_cast<double>(K);
      }
    }
    report.per_fold_accuracy.push_back(
        test_indices.empty()
            ? 0.0
            : static_cast<double>(correct) /
                  static_cast<double>(test_indices.size()));
  }

  report.mean_confusion.rows = mean;
  report.mean_accuracy =
      std::accumulate(report.per_fold_accuracy.begin(),
                      report.per_fold_accuracy.end(), 0.0) /
      static_cast<double>(K);
  double ss = 0.0;
  for (double a : report.per_fold_accuracy) {
    ss += (a - report.mean_accuracy) * (a - report.mean_accuracy);
  }
  report.accuracy_sd = K > 1 ? std::sqrt(ss / static_cast<double>(K - 1)) : 0.0;

  const double d0 = ds.traces.front().meta.distance_cm;
  const bool a0 = ds.traces.front().meta.ambient_on;
  if (std::all_of(ds.traces.begin(), ds.traces.end(), [&](const Trace& t) {
        return t.meta.distance_cm == d0;
      })) {
    report.distance_cm = d0;
  }
  if (std::all_of(ds.traces.begin(), ds.traces.end(), [&](const Trace& t) {
        return t.meta.ambient_on == a0;
      })) {
    report.ambient_on = a0;
  }
  return report;
}

std::string render_report(const EvalReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Text: return render_text(report);
    case ReportFormat::Csv: return render_csv(report);
    case ReportFormat::Json: return render_json(report);
  }
  throw Error("unknown report format");
}

EvalReport parse_report_json(const std::string& text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    EvalReport r;
    r.num_folds = doc.at("num_folds").get<int>();
    r.fold_seed = doc.at("fold_seed").get<std::uint64_t>();
    r.per_fold_accuracy = doc.at("per_fold_accuracy").get<std::vector<double>>();
    r.mean_accuracy = doc.at("mean_accuracy").get<double>();
    r.accuracy_sd = doc.at("accuracy_sd").get<double>();
    r.excluded_traces = doc.at("excluded_traces").get<std::size_t>();
    const auto& matrix = doc.at("mean_confusion");
    if (matrix.size() != kNumGestures) throw Error("confusion matrix not 8x8");
    for (std::size_t p = 0; p < kNumGestures; ++p) {
      const auto row = matrix[p].get<std::vector<double>>();
      if (row.size() != kNumGestures) throw Error("confusion matrix not 8x8");
      std::copy(row.begin(), row.end(), r.mean_confusion.rows[p].begin());
    }
    if (doc.contains("distance_cm")) {
      r.distance_cm = doc["distance_cm"].get<double>();
    }
    if (doc.contains("ambient_on")) {
      r.ambient_on = doc["ambient_on"].get<bool>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report parse error: ") + e.what());
  }
}

}  // namespace lws
