#include "textknn/knn.hpp"

#include <algorithm>
#include <numeric>

namespace textknn {

bool Tied::contains(std::string_view label) const {
  return std::any_of(candidates.begin(), candidates.end(),
                     [&](const TieCandidate& c) { return c.label == label; });
}

std::vector<std::size_t> select_nearest(std::span<const double> distances, std::size_t k) {
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  k = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (distances[a] != distances[b]) return distances[a] < distances[b];
                      return a < b;
                    });
  order.resize(k);
  return order;
}

Prediction vote(std::span<const Neighbor> neighbors) {
  if (neighbors.empty()) throw UsageError("cannot vote without neighbors");

  struct Tally {
    const Neighbor* nearest;
    std::size_t votes;
  };
  // First-seen order equals neighbor rank order.
  std::vector<Tally> tallies;
  for (const Neighbor& n : neighbors) {
    auto it = std::find_if(tallies.begin(), tallies.end(),
                           [&](const Tally& t) { return t.nearest->label == n.label; });
    if (it == tallies.end()) {
      tallies.push_back({&n, 1});
    } else {
      ++it->votes;
    }
  }

  std::size_t top = 0;
  for (const Tally& t : tallies) top = std::max(top, t.votes);

  Tied tied;
  for (const Tally& t : tallies) {
    if (t.votes == top) {
      tied.candidates.push_back({t.nearest->label, t.nearest->distance, t.nearest->train_index});
    }
  }
  if (tied.candidates.size() == 1) return Decided{std::move(tied.candidates.front().label)};
  return tied;
}

std::string resolve_distance_informed(const Prediction& prediction) {
  if (const auto* decided = std::get_if<Decided>(&prediction)) return decided->label;
  const auto& candidates = std::get<Tied>(prediction).candidates;
  const auto best = std::min_element(candidates.begin(), candidates.end(),
                                     [](const TieCandidate& a, const TieCandidate& b) {
                                       if (a.nearest_distance != b.nearest_distance) {
                                         return a.nearest_distance < b.nearest_distance;
                                       }
                                       return a.nearest_index < b.nearest_index;
                                     });
  return best->label;
}

KnnClassifier::KnnClassifier(std::span<const Document> train, const DistanceContext& context,
                             KnnConfig config)
    : train_(train), context_(context), config_(config) {
  if (config_.k == 0) throw UsageError("k must be at least 1");
  if (train_.empty()) throw UsageError("training corpus is empty");
  if (config_.k > train_.size()) {
    throw UsageError("k = " + std::to_string(config_.k) + " exceeds the training set size " +
                     std::to_string(train_.size()));
  }
  if (context_.size() != train_.size()) {
    throw UsageError("distance context was prepared for a different corpus");
  }
}

std::vector<Neighbor> KnnClassifier::nearest_neighbors(std::string_view query) const {
  std::vector<double> distances(train_.size());
  context_.distances_from(query, distances);
  std::vector<Neighbor> neighbors;
  neighbors.reserve(config_.k);
  for (std::size_t index : select_nearest(distances, config_.k)) {
    neighbors.push_back({index, distances[index], train_[index].label});
  }
  return neighbors;
}

Prediction KnnClassifier::classify(std::string_view query) const {
  const std::vector<Neighbor> neighbors = nearest_neighbors(query);
  return vote(neighbors);
}

std::vector<Prediction> KnnClassifier::classify_all(std::span<const Document> queries,
                                                    std::size_t workers) const {
  std::vector<Prediction> predictions(queries.size());
  parallel_for(queries.size(), workers, [&](std::size_t i) { predictions[i] = classify(queries[i].text); });
  return predictions;
}

}  // namespace textknn
