#include "textknn/eval.hpp"

#include <random>

namespace textknn {

namespace {

void require_nonempty(std::span<const LabeledPrediction> preds) {
  if (preds.empty()) throw UsageError("accuracy of an empty prediction list is undefined");
}

bool decided_correct(const LabeledPrediction& p) {
  const auto* decided = std::get_if<Decided>(&p.prediction);
  return decided != nullptr && decided->label == p.truth;
}

const Tied* tie_with_truth(const LabeledPrediction& p) {
  const auto* tied = std::get_if<Tied>(&p.prediction);
  return tied != nullptr && tied->contains(p.truth) ? tied : nullptr;
}

double ratio(double hits, std::size_t total) { return hits / static_cast<double>(total); }

}  // namespace

double optimistic_accuracy(std::span<const LabeledPrediction> preds) {
  require_nonempty(preds);
  std::size_t hits = 0;
  for (const auto& p : preds) hits += decided_correct(p) || tie_with_truth(p) != nullptr;
  return ratio(static_cast<double>(hits), preds.size());
}

double pessimistic_accuracy(std::span<const LabeledPrediction> preds) {
  require_nonempty(preds);
  std::size_t hits = 0;
  for (const auto& p : preds) hits += decided_correct(p);
  return ratio(static_cast<double>(hits), preds.size());
}

double expected_accuracy(std::span<const LabeledPrediction> preds) {
  require_nonempty(preds);
  std::size_t decided_hits = 0;
  double tie_credit = 0.0;
  for (const auto& p : preds) {
    if (decided_correct(p)) {
      ++decided_hits;
    } else if (const Tied* tied = tie_with_truth(p)) {
      tie_credit += 1.0 / static_cast<double>(tied->candidates.size());
    }
  }
  return ratio(static_cast<double>(decided_hits) + tie_credit, preds.size());
}

double distance_informed_accuracy(std::span<const LabeledPrediction> preds) {
  require_nonempty(preds);
  std::size_t hits = 0;
  for (const auto& p : preds) hits += resolve_distance_informed(p.prediction) == p.truth;
  return ratio(static_cast<double>(hits), preds.size());
}

double monte_carlo_accuracy(std::span<const LabeledPrediction> preds, std::size_t trials, std::uint64_t seed) {
  require_nonempty(preds);
  if (trials == 0) throw UsageError("monte carlo accuracy needs at least one trial");

  std::size_t decided_hits = 0;
  // Candidate count and position of the truth for every tie that could be
  // guessed right.
  std::vector<std::pair<std::size_t, std::size_t>> ties;
  for (const auto& p : preds) {
    if (decided_correct(p)) {
      ++decided_hits;
    } else if (const Tied* tied = tie_with_truth(p)) {
      std::size_t truth_at = 0;
      while (tied->candidates[truth_at].label != p.truth) ++truth_at;
      ties.emplace_back(tied->candidates.size(), truth_at);
    }
  }

  std::mt19937_64 rng(seed);
  double accuracy_sum = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::size_t hits = decided_hits;
    for (const auto& [size, truth_at] : ties) {
      std::uniform_int_distribution<std::size_t> pick(0, size - 1);
      hits += pick(rng) == truth_at;
    }
    accuracy_sum += ratio(static_cast<double>(hits), preds.size());
  }
  return accuracy_sum / static_cast<double>(trials);
}

EvaluationReport evaluate(std::span<const LabeledPrediction> preds, double wall_time_seconds) {
  EvaluationReport report;
  for (const auto& p : preds) {
    if (const auto* tied = std::get_if<Tied>(&p.prediction)) {
      ++report.n_tied;
      ++report.tie_sizes[tied->candidates.size()];
      report.n_tied_with_truth += tied->contains(p.truth);
    } else {
      ++report.n_untied;
      report.n_untied_correct += decided_correct(p);
    }
  }
  report.optimistic_accuracy = optimistic_accuracy(preds);
  report.pessimistic_accuracy = pessimistic_accuracy(preds);
  report.expected_accuracy = expected_accuracy(preds);
  report.distance_informed_accuracy = distance_informed_accuracy(preds);
  report.wall_time_seconds = wall_time_seconds;
  return report;
}

nlohmann::ordered_json to_json(const EvaluationReport& report) {
  nlohmann::ordered_json tie_sizes = nlohmann::ordered_json::object();
  for (const auto& [size, count] : report.tie_sizes) tie_sizes[std::to_string(size)] = count;
  return {
      {"n_untied", report.n_untied},
      {"n_tied", report.n_tied},
      {"n_untied_correct", report.n_untied_correct},
      {"n_tied_with_truth", report.n_tied_with_truth},
      {"optimistic_accuracy", report.optimistic_accuracy},
      {"pessimistic_accuracy", report.pessimistic_accuracy},
      {"expected_accuracy", report.expected_accuracy},
      {"distance_informed_accuracy", report.distance_informed_accuracy},
      {"tie_sizes", tie_sizes},
      {"wall_time_seconds", report.wall_time_seconds},
  };
}

}  // namespace textknn
