#include "textknn/bench.hpp"

#include <algorithm>
#include <chrono>

namespace textknn {

EvaluationReport evaluate_split(const Corpus& train, const Corpus& test, const DistanceSpec& spec,
                                const KnnConfig& knn, std::size_t workers) {
  if (test.empty()) throw UsageError("test corpus is empty");
  const auto distance = make_distance(spec);

  const auto start = std::chrono::steady_clock::now();
  const auto context = distance->prepare(train.documents);
  const KnnClassifier classifier(train.documents, *context, knn);
  std::vector<Prediction> predictions = classifier.classify_all(test.documents, workers);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  std::vector<LabeledPrediction> labeled;
  labeled.reserve(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    labeled.push_back({std::move(predictions[i]), test.documents[i].label});
  }
  return evaluate(labeled, elapsed.count());
}

BenchResult run_benchmark(const Corpus& train, const Corpus& test, const DistanceSpec& spec,
                          const KnnConfig& knn, const BenchOptions& options) {
  if (train.empty() || test.empty()) throw UsageError("benchmark corpora must be non-empty");

  if (options.warmup_docs > 0) {
    Corpus warm_train;
    Corpus warm_test;
    const auto n_train = std::min(options.warmup_docs, train.size());
    const auto n_test = std::min(options.warmup_docs, test.size());
    warm_train.documents.assign(train.documents.begin(), train.documents.begin() + static_cast<std::ptrdiff_t>(n_train));
    warm_test.documents.assign(test.documents.begin(), test.documents.begin() + static_cast<std::ptrdiff_t>(n_test));
    evaluate_split(warm_train, warm_test, spec, KnnConfig{std::min(knn.k, n_train)}, options.workers);
  }

  BenchResult result;
  result.method = spec.method;
  result.k = knn.k;
  result.workers = options.workers;
  result.report = evaluate_split(train, test, spec, knn, options.workers);
  result.wall_time_seconds = result.report.wall_time_seconds;
  result.docs_per_second = result.wall_time_seconds > 0.0
                               ? static_cast<double>(test.size()) / result.wall_time_seconds
                               : 0.0;
  return result;
}

nlohmann::ordered_json to_json(const BenchResult& result) {
  nlohmann::ordered_json out = {
      {"method", to_string(result.method)},
      {"k", result.k},
      {"shots", result.shots},
      {"workers", result.workers},
  };
  const nlohmann::ordered_json fields = to_json(result.report);
  for (const auto& [key, value] : fields.items()) out[key] = value;
  out["docs_per_second"] = result.docs_per_second;
  return out;
}

}  // namespace textknn
