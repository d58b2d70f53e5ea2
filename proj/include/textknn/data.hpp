#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "textknn/document.hpp"
#include "textknn/eval.hpp"

namespace textknn {

// Problems with input data: unreadable files, malformed CSV, classes too
// small for the requested sample.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
  DataError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::optional<std::size_t> line() const { return line_; }

 private:
  std::optional<std::size_t> line_;
};

struct Corpus {
  // File order; indices into this vector are the tiebreak order.
  std::vector<Document> documents;

  std::size_t size() const { return documents.size(); }
  bool empty() const { return documents.empty(); }
  // Distinct labels, sorted.
  std::vector<std::string> label_set() const;

  bool operator==(const Corpus&) const = default;
};

struct CsvRecord {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

// RFC 4180 style parsing: comma separated, double-quoted fields may hold
// commas, quotes ("") and line breaks; LF or CRLF line endings; blank lines
// are skipped and a leading UTF-8 BOM is ignored. Invalid UTF-8 is a
// DataError.
std::vector<CsvRecord> parse_csv(std::string_view content, std::string_view source = "<memory>");

struct CsvOptions {
  bool has_header = false;
};

// Two columns per record: label, text.
Corpus parse_corpus(std::string_view content, const CsvOptions& options = {},
                    std::string_view source = "<memory>");
Corpus load_corpus(const std::filesystem::path& path, const CsvOptions& options = {});

void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

std::string read_file(const std::filesystem::path& path);

// Builds a (label, text) corpus from a CSV with arbitrary columns, joining the
// selected text columns with single spaces. Covers layouts such as
// label,title,description.
Corpus convert_columns(std::string_view content, std::size_t label_column,
                       std::span<const std::size_t> text_columns, const CsvOptions& options = {},
                       std::string_view source = "<memory>");

struct FewShotPlan {
  std::size_t shots_per_class = 5;
  std::size_t n_runs = 5;
  std::uint64_t base_seed = 0;

  std::uint64_t seed_for(std::size_t run) const { return base_seed + run; }
};

// Uniform sample without replacement of shots_per_class documents from every
// class, drawn with std::mt19937_64 seeded by plan.seed_for(run). The result
// keeps the original relative document order.
Corpus sample_few_shot(const Corpus& train, const FewShotPlan& plan, std::size_t run);

struct AggregateReport {
  std::vector<EvaluationReport> runs;
  double optimistic_accuracy = 0.0;
  double pessimistic_accuracy = 0.0;
  double expected_accuracy = 0.0;
  double distance_informed_accuracy = 0.0;
  double wall_time_seconds = 0.0;
};

AggregateReport mean_over_runs(std::span<const EvaluationReport> reports);

nlohmann::ordered_json to_json(const AggregateReport& report);

}  // namespace textknn
