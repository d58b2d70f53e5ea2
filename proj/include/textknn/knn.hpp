#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "textknn/distance.hpp"
#include "textknn/document.hpp"

namespace textknn {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct KnnConfig {
  std::size_t k = 2;
};

struct Neighbor {
  std::size_t train_index = 0;
  double distance = 0.0;
  std::string label;

  bool operator==(const Neighbor&) const = default;
};

struct Decided {
  std::string label;

  bool operator==(const Decided&) const = default;
};

// A label sharing the top vote count, with its nearest voting neighbor.
struct TieCandidate {
  std::string label;
  double nearest_distance = 0.0;
  std::size_t nearest_index = 0;

  bool operator==(const TieCandidate&) const = default;
};

// At least two candidates, ordered by the rank of their nearest voting
// neighbor.
struct Tied {
  std::vector<TieCandidate> candidates;

  bool operator==(const Tied&) const = default;
  bool contains(std::string_view label) const;
};

using Prediction = std::variant<Decided, Tied>;

inline bool is_tied(const Prediction& p) { return std::holds_alternative<Tied>(p); }

// Majority vote over neighbors given in rank order. Exposed separately so
// vote handling can be tested without a corpus.
Prediction vote(std::span<const Neighbor> neighbors);

// Tied predictions resolve to the candidate with the smallest nearest
// distance, then the smallest training index. For K=2 this is the K=1 answer.
std::string resolve_distance_informed(const Prediction& prediction);

// Brute-force KNN over a prepared training corpus. Neighbors are ordered by
// (distance, training index), so selection at the K boundary is
// deterministic. Holds references: `train` and `context` must outlive it.
class KnnClassifier {
 public:
  KnnClassifier(std::span<const Document> train, const DistanceContext& context, KnnConfig config);

  const KnnConfig& config() const { return config_; }
  std::size_t train_size() const { return train_.size(); }

  std::vector<Neighbor> nearest_neighbors(std::string_view query) const;
  Prediction classify(std::string_view query) const;

  // Classifies every query; with workers > 1 the queries are split into
  // contiguous chunks over threads. Output does not depend on `workers`.
  std::vector<Prediction> classify_all(std::span<const Document> queries, std::size_t workers = 1) const;

 private:
  std::span<const Document> train_;
  const DistanceContext& context_;
  KnnConfig config_;
};

// Selects the k smallest (distance, index) pairs in ascending order.
std::vector<std::size_t> select_nearest(std::span<const double> distances, std::size_t k);

// Runs fn(i) for i in [0, n) over `workers` threads in contiguous chunks.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn);

}  // namespace textknn

#include "textknn/parallel.inl"
