#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "json.hpp"
#include "textknn/knn.hpp"

namespace textknn {

struct LabeledPrediction {
  Prediction prediction;
  std::string truth;
};

// All accuracy functions throw UsageError on empty input.

// Ties that contain the true label count as correct.
double optimistic_accuracy(std::span<const LabeledPrediction> preds);
// Ties that contain the true label count as wrong.
double pessimistic_accuracy(std::span<const LabeledPrediction> preds);
// Accuracy in expectation under a uniform random choice among tied
// candidates: a tie of c candidates contributes 1/c if it contains the true
// label and 0 otherwise.
double expected_accuracy(std::span<const LabeledPrediction> preds);
// Ties resolved by resolve_distance_informed.
double distance_informed_accuracy(std::span<const LabeledPrediction> preds);

// Mean accuracy over `trials` simulated runs, each resolving every tie by a
// uniform draw from a std::mt19937_64 seeded with `seed`.
double monte_carlo_accuracy(std::span<const LabeledPrediction> preds, std::size_t trials, std::uint64_t seed);

struct EvaluationReport {
  std::size_t n_untied = 0;
  std::size_t n_tied = 0;
  std::size_t n_untied_correct = 0;
  // Ties whose candidates include the true label.
  std::size_t n_tied_with_truth = 0;
  double optimistic_accuracy = 0.0;
  double pessimistic_accuracy = 0.0;
  double expected_accuracy = 0.0;
  double distance_informed_accuracy = 0.0;
  // Candidate count c -> number of ties with that many candidates.
  std::map<std::size_t, std::size_t> tie_sizes;
  double wall_time_seconds = 0.0;

  std::size_t total() const { return n_untied + n_tied; }
};

EvaluationReport evaluate(std::span<const LabeledPrediction> preds, double wall_time_seconds = 0.0);

nlohmann::ordered_json to_json(const EvaluationReport& report);

}  // namespace textknn
