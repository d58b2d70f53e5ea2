#pragma once

#include <cstddef>

#include "json.hpp"
#include "textknn/data.hpp"
#include "textknn/distance.hpp"
#include "textknn/eval.hpp"
#include "textknn/knn.hpp"

namespace textknn {

// Prepares `train` under `spec`, classifies every test document and scores
// the predictions against the test labels. wall_time_seconds covers the
// preparation and classification (not file I/O) on a monotonic clock.
EvaluationReport evaluate_split(const Corpus& train, const Corpus& test, const DistanceSpec& spec,
                                const KnnConfig& knn, std::size_t workers = 1);

struct BenchOptions {
  std::size_t warmup_docs = 10;
  std::size_t workers = 1;
};

struct BenchResult {
  Method method = Method::Simple;
  std::size_t k = 0;
  std::size_t shots = 0;  // 0 when the full training set is used
  std::size_t workers = 1;
  EvaluationReport report;
  double wall_time_seconds = 0.0;
  double docs_per_second = 0.0;
};

// One untimed warm-up over at most `warmup_docs` documents, then a timed
// evaluate_split.
BenchResult run_benchmark(const Corpus& train, const Corpus& test, const DistanceSpec& spec,
                          const KnnConfig& knn, const BenchOptions& options = {});

nlohmann::ordered_json to_json(const BenchResult& result);

}  // namespace textknn
