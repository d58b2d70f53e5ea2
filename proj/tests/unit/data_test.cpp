#include "textknn/data.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "support/synthetic.hpp"

namespace textknn {
namespace {

std::size_t count_label(const Corpus& c, const std::string& label) {
  return static_cast<std::size_t>(
      std::count_if(c.documents.begin(), c.documents.end(), [&](const Document& d) { return d.label == label; }));
}

TEST(ParseCorpus, SimpleRows) {
  const Corpus c = parse_corpus("sports,match today\ntech,new chip\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.documents[0], (Document{"sports", "match today"}));
  EXPECT_EQ(c.documents[1], (Document{"tech", "new chip"}));
  EXPECT_EQ(c.label_set(), (std::vector<std::string>{"sports", "tech"}));
}

TEST(ParseCorpus, QuotedFields) {
  const Corpus c = parse_corpus("a,\"a, b\"\nb,\"say \"\"hi\"\"\nthere\"\r\nc,last");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.documents[0].text, "a, b");
  EXPECT_EQ(c.documents[1].text, "say \"hi\"\nthere");
  EXPECT_EQ(c.documents[2].text, "last");
}

TEST(ParseCorpus, HeaderBomAndBlankLines) {
  const Corpus c = parse_corpus("\xEF\xBB\xBFlabel,text\r\n\r\nx,one\n\ny,two\n", {true});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.documents[0], (Document{"x", "one"}));
}

TEST(ParseCorpus, WrongColumnCountNamesLine) {
  try {
    parse_corpus("a,b\nc,d,e\n", {}, "train.csv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("train.csv:2"), std::string::npos);
  }
}

TEST(ParseCorpus, LineNumbersCountEmbeddedNewlines) {
  try {
    parse_corpus("a,\"multi\nline\"\nb\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseCorpus, Errors) {
  EXPECT_THROW(parse_corpus(""), DataError);
  EXPECT_THROW(parse_corpus("label,text\n", {true}), DataError);
  EXPECT_THROW(parse_corpus("a,\"unterminated\n"), DataError);
  EXPECT_THROW(parse_corpus("a,\"closed\"junk\n"), DataError);
  EXPECT_THROW(parse_corpus("a,bad \xff utf8\n"), DataError);
  EXPECT_THROW(parse_corpus(",no label\n"), DataError);
}

TEST(LoadCorpus, MissingFileNamesPath) {
  try {
    load_corpus("/nonexistent/train.csv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/train.csv"), std::string::npos);
  }
}

TEST(Corpus, RoundTripsThroughCsv) {
  std::mt19937_64 rng(5);
  static const std::vector<std::string> pieces = {"a", "b", ",", "\"", "\n", "\r\n", " ", "é", "\t", "x"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<std::size_t> len(0, 12);
  for (int trial = 0; trial < 200; ++trial) {
    Corpus corpus;
    for (int i = 0; i < 5; ++i) {
      std::string label = "L" + std::to_string(i % 3);
      std::string text;
      for (std::size_t n = len(rng); n > 0; --n) text += pieces[pick(rng)];
      corpus.documents.push_back({label, text});
    }
    std::ostringstream out;
    write_corpus(out, corpus);
    ASSERT_EQ(parse_corpus(out.str()), corpus) << out.str();
  }
}

TEST(Corpus, SaveAndLoadFile) {
  const auto path = std::filesystem::temp_directory_path() / "textknn_data_test.csv";
  const Corpus corpus{{{"x", "first, with comma"}, {"y", "second"}}};
  save_corpus(path, corpus);
  EXPECT_EQ(load_corpus(path), corpus);
  std::filesystem::remove(path);
}

TEST(ConvertColumns, JoinsTextColumns) {
  const std::vector<std::size_t> cols = {1, 2};
  const Corpus c = convert_columns("\"3\",\"Title one\",\"Body, text\"\n\"1\",\"T2\",\"B2\"\n", 0, cols);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.documents[0], (Document{"3", "Title one Body, text"}));
  EXPECT_THROW(convert_columns("1,only\n", 0, cols), DataError);
}

class FewShot : public ::testing::Test {
 protected:
  Corpus corpus = [] {
    testing::SyntheticSpec spec;
    spec.n_classes = 4;
    spec.docs_per_class = 20;
    spec.words_per_doc = 10;
    return testing::synthetic_corpus(spec);
  }();
};

TEST_F(FewShot, ExactCountsPerClass) {
  const Corpus sample = sample_few_shot(corpus, {5, 5, 0}, 0);
  ASSERT_EQ(sample.size(), 20u);
  for (const auto& label : corpus.label_set()) EXPECT_EQ(count_label(sample, label), 5u);
}

TEST_F(FewShot, DeterministicAndOrderPreserving) {
  const FewShotPlan plan{5, 5, 123};
  const Corpus a = sample_few_shot(corpus, plan, 2);
  EXPECT_EQ(a, sample_few_shot(corpus, plan, 2));
  // Relative order of the original corpus is kept.
  std::size_t cursor = 0;
  for (const Document& d : a.documents) {
    while (cursor < corpus.size() && !(corpus.documents[cursor] == d)) ++cursor;
    ASSERT_LT(cursor, corpus.size());
    ++cursor;
  }
}

TEST_F(FewShot, RunsUseDistinctSeeds) {
  const FewShotPlan plan{5, 5, 0};
  EXPECT_EQ(plan.seed_for(3), 3u);
  // Not a guarantee, but a collision here would indicate seeds are ignored.
  EXPECT_NE(sample_few_shot(corpus, plan, 0), sample_few_shot(corpus, plan, 1));
}

TEST_F(FewShot, BalancedForEveryRunAndShotCount) {
  for (std::size_t shots : {1u, 3u, 20u}) {
    for (std::size_t run = 0; run < 5; ++run) {
      const Corpus sample = sample_few_shot(corpus, {shots, 5, 9}, run);
      for (const auto& label : corpus.label_set()) ASSERT_EQ(count_label(sample, label), shots);
    }
  }
}

TEST_F(FewShot, Errors) {
  try {
    sample_few_shot(corpus, {21, 5, 0}, 0);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("class0"), std::string::npos);
  }
  EXPECT_THROW(sample_few_shot(corpus, {5, 5, 0}, 5), UsageError);
  EXPECT_THROW(sample_few_shot(corpus, {0, 5, 0}, 0), UsageError);
}

TEST(MeanOverRuns, Arithmetic) {
  EvaluationReport a;
  a.optimistic_accuracy = 0.4;
  a.expected_accuracy = 0.4;
  a.wall_time_seconds = 10.0;
  EvaluationReport b = a;
  b.optimistic_accuracy = 0.6;
  b.expected_accuracy = 0.6;
  b.wall_time_seconds = 20.0;
  EvaluationReport c = a;
  c.wall_time_seconds = 30.0;

  const AggregateReport one = mean_over_runs(std::vector{a});
  EXPECT_EQ(one.optimistic_accuracy, 0.4);
  EXPECT_EQ(one.wall_time_seconds, 10.0);
  EXPECT_DOUBLE_EQ(mean_over_runs(std::vector{a, b}).optimistic_accuracy, 0.5);
  EXPECT_DOUBLE_EQ(mean_over_runs(std::vector{a, b, c}).wall_time_seconds, 20.0);
  EXPECT_EQ(mean_over_runs(std::vector{a, b, c}).runs.size(), 3u);
  EXPECT_THROW(mean_over_runs(std::vector<EvaluationReport>{}), UsageError);
}

}  // namespace
}  // namespace textknn
