#include "textknn/eval.hpp"

#include <gtest/gtest.h>

#include <random>

#include "support/synthetic.hpp"

namespace textknn {
namespace {

LabeledPrediction decided(const std::string& predicted, const std::string& truth) {
  return {Decided{predicted}, truth};
}

LabeledPrediction tied(std::vector<std::string> labels, const std::string& truth) {
  Tied t;
  double d = 0.1;
  std::size_t index = 0;
  for (auto& l : labels) t.candidates.push_back({std::move(l), d += 0.1, index++});
  return {std::move(t), truth};
}

TEST(OptimisticAccuracy, Examples) {
  std::vector<LabeledPrediction> all_correct(10, decided("A", "A"));
  EXPECT_EQ(optimistic_accuracy(all_correct), 1.0);
  EXPECT_EQ(optimistic_accuracy(std::vector{tied({"A", "B"}, "A")}), 1.0);
  EXPECT_EQ(optimistic_accuracy(std::vector{tied({"A", "B"}, "C")}), 0.0);
}

TEST(PessimisticAccuracy, Examples) {
  std::vector<LabeledPrediction> all_correct(10, decided("A", "A"));
  EXPECT_EQ(pessimistic_accuracy(all_correct), 1.0);
  EXPECT_EQ(pessimistic_accuracy(std::vector{tied({"A", "B"}, "A")}), 0.0);
  EXPECT_EQ(pessimistic_accuracy(std::vector{decided("A", "A"), tied({"A", "B"}, "A")}), 0.5);
}

TEST(ExpectedAccuracy, HandEvaluatedExample) {
  std::vector<LabeledPrediction> preds;
  for (int i = 0; i < 60; ++i) preds.push_back(decided("A", "A"));
  for (int i = 0; i < 30; ++i) preds.push_back(decided("B", "A"));
  for (int i = 0; i < 10; ++i) preds.push_back(tied({"A", "B"}, "A"));
  EXPECT_DOUBLE_EQ(expected_accuracy(preds), 0.65);
}

TEST(ExpectedAccuracy, NoTiesIsPlainAccuracy) {
  const std::vector preds = {decided("A", "A"), decided("B", "A"), decided("C", "C"), decided("A", "B")};
  EXPECT_EQ(expected_accuracy(preds), 0.5);
  EXPECT_EQ(optimistic_accuracy(preds), 0.5);
  EXPECT_EQ(pessimistic_accuracy(preds), 0.5);
}

TEST(ExpectedAccuracy, TiesWithoutTruthContributeNothing) {
  EXPECT_EQ(expected_accuracy(std::vector{tied({"A", "B", "C"}, "D")}), 0.0);
  EXPECT_DOUBLE_EQ(expected_accuracy(std::vector{tied({"A", "B", "C"}, "B")}), 1.0 / 3.0);
}

TEST(Accuracy, EmptyInputIsUsageError) {
  const std::vector<LabeledPrediction> none;
  EXPECT_THROW(optimistic_accuracy(none), UsageError);
  EXPECT_THROW(pessimistic_accuracy(none), UsageError);
  EXPECT_THROW(expected_accuracy(none), UsageError);
  EXPECT_THROW(monte_carlo_accuracy(none, 10, 0), UsageError);
}

TEST(MonteCarloAccuracy, ExactWithoutTies) {
  const std::vector preds = {decided("A", "A"), decided("B", "A"), decided("C", "C")};
  for (std::uint64_t seed : {0u, 1u, 42u}) {
    EXPECT_DOUBLE_EQ(monte_carlo_accuracy(preds, 7, seed), 2.0 / 3.0);
  }
}

TEST(MonteCarloAccuracy, SingleTwoWayTieConcentratesAtHalf) {
  EXPECT_NEAR(monte_carlo_accuracy(std::vector{tied({"A", "B"}, "A")}, 10000, 5), 0.5, 0.02);
}

TEST(MonteCarloAccuracy, RejectsZeroTrials) {
  EXPECT_THROW(monte_carlo_accuracy(std::vector{decided("A", "A")}, 0, 0), UsageError);
}

TEST(Evaluate, Bookkeeping) {
  const std::vector preds = {decided("A", "A"), decided("B", "A"), tied({"A", "B"}, "A"),
                             tied({"A", "B", "C"}, "D"), tied({"C", "D"}, "C")};
  const EvaluationReport r = evaluate(preds, 1.5);
  EXPECT_EQ(r.n_untied, 2u);
  EXPECT_EQ(r.n_tied, 3u);
  EXPECT_EQ(r.n_untied_correct, 1u);
  EXPECT_EQ(r.n_tied_with_truth, 2u);
  EXPECT_EQ(r.tie_sizes, (std::map<std::size_t, std::size_t>{{2, 2}, {3, 1}}));
  EXPECT_DOUBLE_EQ(r.optimistic_accuracy, 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(r.pessimistic_accuracy, 1.0 / 5.0);
  EXPECT_DOUBLE_EQ(r.expected_accuracy, 2.0 / 5.0);
  EXPECT_DOUBLE_EQ(r.distance_informed_accuracy, 3.0 / 5.0);
  EXPECT_EQ(r.wall_time_seconds, 1.5);

  const auto j = to_json(r);
  EXPECT_EQ(j.at("n_tied"), 3);
  EXPECT_EQ(j.at("tie_sizes").at("2"), 2);
}

class AccuracyProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{31337};
};

TEST_F(AccuracyProperties, Sandwich) {
  for (int i = 0; i < 300; ++i) {
    const auto preds = testing::random_predictions(rng, 60, 5, 0.4, 4);
    const auto r = evaluate(preds);
    ASSERT_LE(r.pessimistic_accuracy, r.expected_accuracy);
    ASSERT_LE(r.expected_accuracy, r.optimistic_accuracy);
    ASSERT_EQ(r.total(), preds.size());
    ASSERT_NEAR(r.optimistic_accuracy - r.pessimistic_accuracy,
                static_cast<double>(r.n_tied_with_truth) / static_cast<double>(r.total()), 1e-12);
    const bool equal = r.pessimistic_accuracy == r.optimistic_accuracy;
    ASSERT_EQ(equal, r.n_tied_with_truth == 0);
  }
}

TEST_F(AccuracyProperties, TwoWayTiesGiveMidpoint) {
  for (int i = 0; i < 300; ++i) {
    const auto preds = testing::random_predictions(rng, 80, 4, 0.5, 2);
    ASSERT_NEAR(expected_accuracy(preds), (optimistic_accuracy(preds) + pessimistic_accuracy(preds)) / 2.0, 1e-12);
  }
}

TEST_F(AccuracyProperties, DuplicationLeavesAccuraciesUnchanged) {
  for (int i = 0; i < 100; ++i) {
    const auto preds = testing::random_predictions(rng, 37, 4, 0.4, 4);
    std::vector<LabeledPrediction> doubled = preds;
    doubled.insert(doubled.end(), preds.begin(), preds.end());
    ASSERT_NEAR(expected_accuracy(doubled), expected_accuracy(preds), 1e-12);
    ASSERT_DOUBLE_EQ(optimistic_accuracy(doubled), optimistic_accuracy(preds));
    ASSERT_DOUBLE_EQ(pessimistic_accuracy(doubled), pessimistic_accuracy(preds));
  }
}

TEST_F(AccuracyProperties, MonteCarloAgreesWithExpectation) {
  for (int i = 0; i < 5; ++i) {
    const auto preds = testing::random_predictions(rng, 60, 5, 0.5, 4);
    EXPECT_NEAR(monte_carlo_accuracy(preds, 10000, i), expected_accuracy(preds), 0.01);
  }
}

}  // namespace
}  // namespace textknn
