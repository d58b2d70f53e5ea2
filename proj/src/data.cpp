#include "textknn/data.hpp"

#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace textknn {

namespace {

// Returns the byte offset of the first invalid UTF-8 sequence, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return static_cast<std::size_t>(start);
  }
  return std::nullopt;
}

bool needs_quoting(std::string_view field) {
  return field.empty() || field.find_first_of(",\"\r\n") != std::string_view::npos ||
         field.front() == ' ' || field.back() == ' ';
}

void write_field(std::ostream& out, std::string_view field) {
  if (!needs_quoting(field)) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

std::vector<std::string> Corpus::label_set() const {
  std::vector<std::string> labels;
  for (const Document& doc : documents) labels.push_back(doc.label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

std::vector<CsvRecord> parse_csv(std::string_view content, std::string_view source) {
  const std::string src(source);
  if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);
  if (auto bad = find_invalid_utf8(content)) {
    const auto line = 1 + static_cast<std::size_t>(std::count(content.begin(), content.begin() + *bad, '\n'));
    throw DataError(src, line, "invalid UTF-8");
  }

  std::vector<CsvRecord> records;
  CsvRecord record;
  std::string field;
  std::size_t line = 1;
  bool in_record = false;
  bool field_quoted = false;
  std::size_t i = 0;
  const std::size_t n = content.size();

  auto end_field = [&] {
    record.fields.push_back(std::move(field));
    field.clear();
    field_quoted = false;
  };
  auto end_record = [&] {
    if (in_record) {
      end_field();
      records.push_back(std::move(record));
    }
    record = CsvRecord{};
    in_record = false;
  };

  while (i < n) {
    const char c = content[i];
    if (!in_record) {
      if (c == '\n') {
        ++line;
        ++i;
        continue;
      }
      if (c == '\r' && i + 1 < n && content[i + 1] == '\n') {
        ++line;
        i += 2;
        continue;
      }
      in_record = true;
      record.line = line;
    }

    if (c == '"' && field.empty() && !field_quoted) {
      field_quoted = true;
      const std::size_t open_line = line;
      ++i;
      while (true) {
        if (i >= n) throw DataError(src, open_line, "unterminated quoted field");
        if (content[i] == '"') {
          if (i + 1 < n && content[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (content[i] == '\n') ++line;
        field.push_back(content[i++]);
      }
      if (i < n && content[i] != ',' && content[i] != '\n' &&
          !(content[i] == '\r' && i + 1 < n && content[i + 1] == '\n')) {
        throw DataError(src, line, "unexpected character after closing quote");
      }
      continue;
    }

    if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\n') {
      end_record();
      ++line;
      ++i;
    } else if (c == '\r' && i + 1 < n && content[i + 1] == '\n') {
      end_record();
      ++line;
      i += 2;
    } else {
      if (field_quoted) throw DataError(src, line, "unexpected character after closing quote");
      field.push_back(c);
      ++i;
    }
  }
  end_record();
  return records;
}

Corpus parse_corpus(std::string_view content, const CsvOptions& options, std::string_view source) {
  std::vector<CsvRecord> records = parse_csv(content, source);
  std::span<CsvRecord> rows(records);
  if (options.has_header && !rows.empty()) rows = rows.subspan(1);
  if (rows.empty()) throw DataError(std::string(source) + ": file contains no documents");

  Corpus corpus;
  corpus.documents.reserve(rows.size());
  for (CsvRecord& row : rows) {
    if (row.fields.size() != 2) {
      throw DataError(std::string(source), row.line,
                      "expected 2 columns (label, text), found " + std::to_string(row.fields.size()));
    }
    if (row.fields[0].empty()) throw DataError(std::string(source), row.line, "empty label");
    corpus.documents.push_back({std::move(row.fields[0]), std::move(row.fields[1])});
  }
  return corpus;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

Corpus load_corpus(const std::filesystem::path& path, const CsvOptions& options) {
  return parse_corpus(read_file(path), options, path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const Document& doc : corpus.documents) {
    write_field(out, doc.label);
    out << ',';
    write_field(out, doc.text);
    out << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_corpus(out, corpus);
}

Corpus convert_columns(std::string_view content, std::size_t label_column,
                       std::span<const std::size_t> text_columns, const CsvOptions& options,
                       std::string_view source) {
  if (text_columns.empty()) throw UsageError("at least one text column is required");
  std::vector<CsvRecord> records = parse_csv(content, source);
  std::span<CsvRecord> rows(records);
  if (options.has_header && !rows.empty()) rows = rows.subspan(1);
  if (rows.empty()) throw DataError(std::string(source) + ": file contains no documents");

  std::size_t needed = label_column;
  for (std::size_t c : text_columns) needed = std::max(needed, c);

  Corpus corpus;
  for (CsvRecord& row : rows) {
    if (row.fields.size() <= needed) {
      throw DataError(std::string(source), row.line,
                      "expected at least " + std::to_string(needed + 1) + " columns, found " +
                          std::to_string(row.fields.size()));
    }
    std::string text;
    for (std::size_t c : text_columns) {
      if (!text.empty()) text.push_back(' ');
      text += row.fields[c];
    }
    corpus.documents.push_back({row.fields[label_column], std::move(text)});
  }
  return corpus;
}

Corpus sample_few_shot(const Corpus& train, const FewShotPlan& plan, std::size_t run) {
  if (plan.shots_per_class == 0) throw UsageError("shots per class must be positive");
  if (run >= plan.n_runs) {
    throw UsageError("run " + std::to_string(run) + " outside plan of " + std::to_string(plan.n_runs) + " runs");
  }

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < train.documents.size(); ++i) by_class[train.documents[i].label].push_back(i);

  std::mt19937_64 rng(plan.seed_for(run));
  std::vector<std::size_t> chosen;
  for (const auto& [label, indices] : by_class) {
    if (indices.size() < plan.shots_per_class) {
      throw DataError("class '" + label + "' has " + std::to_string(indices.size()) + " documents, fewer than " +
                      std::to_string(plan.shots_per_class) + " shots");
    }
    std::sample(indices.begin(), indices.end(), std::back_inserter(chosen), plan.shots_per_class, rng);
  }
  std::sort(chosen.begin(), chosen.end());

  Corpus sample;
  sample.documents.reserve(chosen.size());
  for (std::size_t i : chosen) sample.documents.push_back(train.documents[i]);
  return sample;
}

AggregateReport mean_over_runs(std::span<const EvaluationReport> reports) {
  if (reports.empty()) throw UsageError("cannot average zero runs");
  AggregateReport aggregate;
  aggregate.runs.assign(reports.begin(), reports.end());
  for (const EvaluationReport& r : reports) {
    aggregate.optimistic_accuracy += r.optimistic_accuracy;
    aggregate.pessimistic_accuracy += r.pessimistic_accuracy;
    aggregate.expected_accuracy += r.expected_accuracy;
    aggregate.distance_informed_accuracy += r.distance_informed_accuracy;
    aggregate.wall_time_seconds += r.wall_time_seconds;
  }
  const auto n = static_cast<double>(reports.size());
  aggregate.optimistic_accuracy /= n;
  aggregate.pessimistic_accuracy /= n;
  aggregate.expected_accuracy /= n;
  aggregate.distance_informed_accuracy /= n;
  aggregate.wall_time_seconds /= n;
  return aggregate;
}

nlohmann::ordered_json to_json(const AggregateReport& report) {
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const EvaluationReport& r : report.runs) runs.push_back(to_json(r));
  return {
      {"optimistic_accuracy", report.optimistic_accuracy},
      {"pessimistic_accuracy", report.pessimistic_accuracy},
      {"expected_accuracy", report.expected_accuracy},
      {"distance_informed_accuracy", report.distance_informed_accuracy},
      {"wall_time_seconds", report.wall_time_seconds},
      {"runs", runs},
  };
}

}  // namespace textknn
