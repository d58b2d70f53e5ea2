#include "textknn/experiment.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace textknn {

namespace {

using ojson = nlohmann::ordered_json;

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config field '") + key + "': " + e.what());
  }
}

std::size_t parse_size(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

struct Corpora {
  Corpus train;
  Corpus test;
};

Corpora load_corpora(const ExperimentConfig& config) {
  const CsvOptions options{config.header};
  return {load_corpus(config.train_path, options), load_corpus(config.test_path, options)};
}

void append_report(ojson& row, const EvaluationReport& report, TiePolicy policy) {
  row["tie_policy"] = to_string(policy);
  row["accuracy"] = headline_accuracy(report, policy);
  const ojson fields = to_json(report);
  for (const auto& [key, value] : fields.items()) row[key] = value;
}

void append_mean(ojson& row, const AggregateReport& mean, TiePolicy policy) {
  EvaluationReport as_report;
  as_report.optimistic_accuracy = mean.optimistic_accuracy;
  as_report.pessimistic_accuracy = mean.pessimistic_accuracy;
  as_report.expected_accuracy = mean.expected_accuracy;
  as_report.distance_informed_accuracy = mean.distance_informed_accuracy;
  row["tie_policy"] = to_string(policy);
  row["accuracy"] = headline_accuracy(as_report, policy);
  row["optimistic_accuracy"] = mean.optimistic_accuracy;
  row["pessimistic_accuracy"] = mean.pessimistic_accuracy;
  row["expected_accuracy"] = mean.expected_accuracy;
  row["distance_informed_accuracy"] = mean.distance_informed_accuracy;
  row["wall_time_seconds"] = mean.wall_time_seconds;
}

std::string cell(const nlohmann::ordered_json& value) {
  if (value.is_null()) return "";
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

std::string table_cell(const std::string& key, const nlohmann::ordered_json& value) {
  if (!value.is_number_float()) return cell(value);
  const double v = value.get<double>();
  char buf[64];
  if (key.ends_with("accuracy")) {
    std::snprintf(buf, sizeof buf, "%.3f", v);
  } else if (key == "wall_time_seconds") {
    std::snprintf(buf, sizeof buf, "%.2fs", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.1f", v);
  }
  return buf;
}

std::vector<std::string> column_order(const std::vector<nlohmann::ordered_json>& rows) {
  std::vector<std::string> columns;
  for (const auto& row : rows) {
    for (const auto& [key, value] : row.items()) {
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
    }
  }
  return columns;
}

std::string describe(const AblationVariant& v) {
  std::string text = v.config.normalize ? "" : "only split, ";
  const std::string n = std::to_string(v.config.min_token_len_exclusive);
  text += v.config.length_filter == LengthFilter::KeepAtMost ? "keep only n<=" + n : "n=" + n;
  return text;
}

}  // namespace

std::string_view to_string(TiePolicy policy) {
  switch (policy) {
    case TiePolicy::Optimistic:
      return "optimistic";
    case TiePolicy::Pessimistic:
      return "pessimistic";
    case TiePolicy::Expected:
      return "expected";
    case TiePolicy::DistanceInformed:
      return "distance_informed";
  }
  return "unknown";
}

TiePolicy parse_tie_policy(std::string_view name) {
  for (auto p : {TiePolicy::Optimistic, TiePolicy::Pessimistic, TiePolicy::Expected, TiePolicy::DistanceInformed}) {
    if (to_string(p) == name) return p;
  }
  throw UsageError("unknown tie policy '" + std::string(name) +
                   "' (expected optimistic, pessimistic, expected or distance_informed)");
}

std::string_view to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::Json:
      return "json";
    case OutputFormat::Tsv:
      return "tsv";
    case OutputFormat::Table:
      return "table";
  }
  return "unknown";
}

OutputFormat parse_output_format(std::string_view name) {
  for (auto f : {OutputFormat::Json, OutputFormat::Tsv, OutputFormat::Table}) {
    if (to_string(f) == name) return f;
  }
  throw UsageError("unknown output format '" + std::string(name) + "' (expected json, tsv or table)");
}

std::string_view to_string(LengthFilter filter) {
  return filter == LengthFilter::KeepLonger ? "keep_longer" : "keep_at_most";
}

LengthFilter parse_length_filter(std::string_view name) {
  if (name == "keep_longer") return LengthFilter::KeepLonger;
  if (name == "keep_at_most") return LengthFilter::KeepAtMost;
  throw UsageError("unknown length filter '" + std::string(name) + "' (expected keep_longer or keep_at_most)");
}

nlohmann::ordered_json to_json(const ExperimentConfig& config) {
  const PreprocessConfig& pre = config.distance.preprocess;
  ojson methods = ojson::array();
  for (Method m : config.methods) methods.push_back(to_string(m));
  return {
      {"method", to_string(config.distance.method)},
      {"k", config.k},
      {"tie_policy", to_string(config.tie_policy)},
      {"preprocess",
       {
           {"punctuation_to_space", pre.punctuation_to_space},
           {"lowercase", pre.lowercase},
           {"min_token_len_exclusive", pre.min_token_len_exclusive},
           {"length_filter", to_string(pre.length_filter)},
           {"normalize", pre.normalize},
       }},
      {"gzip", {{"level", config.distance.ncd.level}, {"space_separator", config.distance.ncd.space_separator}}},
      {"train", config.train_path},
      {"test", config.test_path},
      {"header", config.header},
      {"few_shot",
       {
           {"shots_per_class", config.few_shot.shots_per_class},
           {"runs", config.few_shot.n_runs},
           {"base_seed", config.few_shot.base_seed},
       }},
      {"shots_grid", config.shots_grid},
      {"methods", methods},
      {"variants", config.variants},
      {"workers", config.workers},
      {"format", to_string(config.format)},
      {"output", config.output_path},
  };
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("experiment config must be a JSON object");
  ExperimentConfig c;
  c.distance.method = parse_method(get_or<std::string>(j, "method", "simple"));
  c.k = get_or<std::size_t>(j, "k", c.k);
  c.tie_policy = parse_tie_policy(get_or<std::string>(j, "tie_policy", "expected"));
  if (j.contains("preprocess")) {
    const auto& p = j.at("preprocess");
    PreprocessConfig& pre = c.distance.preprocess;
    pre.punctuation_to_space = get_or<std::string>(p, "punctuation_to_space", pre.punctuation_to_space);
    pre.lowercase = get_or<bool>(p, "lowercase", pre.lowercase);
    pre.min_token_len_exclusive = get_or<std::size_t>(p, "min_token_len_exclusive", pre.min_token_len_exclusive);
    pre.length_filter = parse_length_filter(get_or<std::string>(p, "length_filter", "keep_longer"));
    pre.normalize = get_or<bool>(p, "normalize", pre.normalize);
  }
  if (j.contains("gzip")) {
    const auto& g = j.at("gzip");
    c.distance.ncd.level = get_or<int>(g, "level", c.distance.ncd.level);
    c.distance.ncd.space_separator = get_or<bool>(g, "space_separator", c.distance.ncd.space_separator);
  }
  c.train_path = get_or<std::string>(j, "train", "");
  c.test_path = get_or<std::string>(j, "test", "");
  c.header = get_or<bool>(j, "header", false);
  if (j.contains("few_shot")) {
    const auto& f = j.at("few_shot");
    c.few_shot.shots_per_class = get_or<std::size_t>(f, "shots_per_class", c.few_shot.shots_per_class);
    c.few_shot.n_runs = get_or<std::size_t>(f, "runs", c.few_shot.n_runs);
    c.few_shot.base_seed = get_or<std::uint64_t>(f, "base_seed", c.few_shot.base_seed);
  }
  c.shots_grid = get_or<std::vector<std::size_t>>(j, "shots_grid", {});
  for (const auto& m : get_or<std::vector<std::string>>(j, "methods", {})) c.methods.push_back(parse_method(m));
  c.variants = get_or<std::vector<std::string>>(j, "variants", {});
  c.workers = get_or<std::size_t>(j, "workers", c.workers);
  c.format = parse_output_format(get_or<std::string>(j, "format", "json"));
  c.output_path = get_or<std::string>(j, "output", "");
  return c;
}

void validate(const ExperimentConfig& config) {
  if (config.k == 0) throw UsageError("--k must be at least 1");
  if (config.train_path.empty()) throw UsageError("--train is required");
  if (config.test_path.empty()) throw UsageError("--test is required");
  if (config.distance.ncd.level < 0 || config.distance.ncd.level > 9) {
    throw UsageError("--level must be in [0, 9]");
  }
  if (config.few_shot.n_runs == 0) throw UsageError("--runs must be at least 1");
  if (config.workers == 0) throw UsageError("--workers must be at least 1");
}

double headline_accuracy(const EvaluationReport& report, TiePolicy policy) {
  switch (policy) {
    case TiePolicy::Optimistic:
      return report.optimistic_accuracy;
    case TiePolicy::Pessimistic:
      return report.pessimistic_accuracy;
    case TiePolicy::Expected:
      return report.expected_accuracy;
    case TiePolicy::DistanceInformed:
      return report.distance_informed_accuracy;
  }
  return report.expected_accuracy;
}

AblationVariant parse_ablation_variant(std::string_view name, const PreprocessConfig& base) {
  AblationVariant variant{std::string(name), "", base};
  PreprocessConfig& config = variant.config;
  config.normalize = true;
  config.length_filter = LengthFilter::KeepLonger;

  std::string_view rest = name;
  bool saw_n = false;
  while (!rest.empty()) {
    const auto colon = rest.find(':');
    const std::string_view part = rest.substr(0, colon);
    rest = colon == std::string_view::npos ? std::string_view{} : rest.substr(colon + 1);
    if (saw_n) throw UsageError("ablation variant '" + std::string(name) + "': n=<int> must come last");
    if (part == "split") {
      config.normalize = false;
    } else if (part == "atmost") {
      config.length_filter = LengthFilter::KeepAtMost;
    } else if (part.starts_with("n=")) {
      config.min_token_len_exclusive = parse_size(part.substr(2), "token length in ablation variant");
      saw_n = true;
    } else {
      throw UsageError("ablation variant '" + std::string(name) + "': unknown part '" + std::string(part) +
                       "' (syntax: [split:][atmost:]n=<int>)");
    }
  }
  if (!saw_n) throw UsageError("ablation variant '" + std::string(name) + "' is missing n=<int>");
  variant.description = describe(variant);
  return variant;
}

std::vector<AblationVariant> default_ablation_grid(const PreprocessConfig& base) {
  std::vector<AblationVariant> grid;
  for (const char* name : {"n=3", "n=0", "n=1", "n=2", "n=4", "n=10", "atmost:n=3", "split:n=3", "split:n=0"}) {
    grid.push_back(parse_ablation_variant(name, base));
  }
  grid.front().description = "basic (n=3)";
  return grid;
}

ExperimentOutput cmd_evaluate(const ExperimentConfig& config) {
  validate(config);
  const Corpora data = load_corpora(config);
  const EvaluationReport report =
      evaluate_split(data.train, data.test, config.distance, KnnConfig{config.k}, config.workers);

  ojson row = {
      {"method", to_string(config.distance.method)},
      {"k", config.k},
      {"train_size", data.train.size()},
      {"test_size", data.test.size()},
  };
  append_report(row, report, config.tie_policy);
  return {"evaluate", config, {row}};
}

ExperimentOutput cmd_fewshot(const ExperimentConfig& config) {
  validate(config);
  const Corpora data = load_corpora(config);
  const FewShotPlan& plan = config.few_shot;

  ExperimentOutput output{"fewshot", config, {}};
  std::vector<EvaluationReport> reports;
  for (std::size_t run = 0; run < plan.n_runs; ++run) {
    const Corpus train = sample_few_shot(data.train, plan, run);
    reports.push_back(evaluate_split(train, data.test, config.distance, KnnConfig{config.k}, config.workers));
    ojson row = {
        {"run", run},
        {"seed", plan.seed_for(run)},
        {"method", to_string(config.distance.method)},
        {"k", config.k},
        {"shots", plan.shots_per_class},
        {"train_size", train.size()},
        {"test_size", data.test.size()},
    };
    append_report(row, reports.back(), config.tie_policy);
    output.rows.push_back(std::move(row));
  }

  ojson mean = {
      {"run", "mean"},
      {"seed", plan.base_seed},
      {"method", to_string(config.distance.method)},
      {"k", config.k},
      {"shots", plan.shots_per_class},
  };
  append_mean(mean, mean_over_runs(reports), config.tie_policy);
  output.rows.push_back(std::move(mean));
  return output;
}

ExperimentOutput cmd_ablate(const ExperimentConfig& config) {
  validate(config);
  if (config.distance.method != Method::Simple) {
    throw UsageError("the ablation grid varies preprocessing and applies only to --method simple");
  }
  std::vector<AblationVariant> grid;
  if (config.variants.empty()) {
    grid = default_ablation_grid(config.distance.preprocess);
  } else {
    for (const auto& name : config.variants) grid.push_back(parse_ablation_variant(name, config.distance.preprocess));
  }

  const Corpora data = load_corpora(config);
  ExperimentOutput output{"ablate", config, {}};
  for (const AblationVariant& variant : grid) {
    DistanceSpec spec = config.distance;
    spec.preprocess = variant.config;
    const EvaluationReport report = evaluate_split(data.train, data.test, spec, KnnConfig{config.k}, config.workers);
    ojson row = {
        {"variant", variant.name},
        {"description", variant.description},
        {"min_token_len_exclusive", variant.config.min_token_len_exclusive},
        {"length_filter", to_string(variant.config.length_filter)},
        {"normalize", variant.config.normalize},
        {"k", config.k},
    };
    append_report(row, report, config.tie_policy);
    output.rows.push_back(std::move(row));
  }
  return output;
}

ExperimentOutput cmd_bench(const ExperimentConfig& config) {
  validate(config);
  const Corpora data = load_corpora(config);
  const std::vector<Method> methods =
      config.methods.empty() ? std::vector<Method>{Method::Simple, Method::Gzip} : config.methods;
  const std::vector<std::size_t> shots_grid =
      config.shots_grid.empty() ? std::vector<std::size_t>{0} : config.shots_grid;

  ExperimentOutput output{"bench", config, {}};
  for (Method method : methods) {
    DistanceSpec spec = config.distance;
    spec.method = method;
    for (std::size_t shots : shots_grid) {
      FewShotPlan plan = config.few_shot;
      plan.shots_per_class = shots;
      const std::size_t runs = shots == 0 ? 1 : plan.n_runs;

      std::vector<EvaluationReport> reports;
      for (std::size_t run = 0; run < runs; ++run) {
        const Corpus train = shots == 0 ? data.train : sample_few_shot(data.train, plan, run);
        reports.push_back(run_benchmark(train, data.test, spec, KnnConfig{config.k}, {10, config.workers}).report);
      }
      const AggregateReport mean = mean_over_runs(reports);
      ojson row = {
          {"method", to_string(method)},
          {"k", config.k},
          {"shots", shots},
          {"runs", runs},
          {"workers", config.workers},
          {"test_size", data.test.size()},
      };
      append_mean(row, mean, config.tie_policy);
      row["docs_per_second"] =
          mean.wall_time_seconds > 0.0 ? static_cast<double>(data.test.size()) / mean.wall_time_seconds : 0.0;
      output.rows.push_back(std::move(row));
    }
  }
  return output;
}

ExperimentOutput run_command(std::string_view command, const ExperimentConfig& config) {
  if (command == "evaluate") return cmd_evaluate(config);
  if (command == "fewshot") return cmd_fewshot(config);
  if (command == "ablate") return cmd_ablate(config);
  if (command == "bench") return cmd_bench(config);
  throw UsageError("unknown command '" + std::string(command) + "'");
}

std::string render(const ExperimentOutput& output, OutputFormat format) {
  const ojson config = to_json(output.config);
  if (format == OutputFormat::Json) {
    ojson doc = {{"command", output.command}, {"config", config}, {"results", output.rows}};
    return doc.dump(2) + "\n";
  }

  std::vector<std::string> columns = column_order(output.rows);
  std::ostringstream out;
  if (format == OutputFormat::Tsv) {
    out << "command";
    for (const auto& c : columns) out << '\t' << c;
    out << "\tconfig\n";
    const std::string config_cell = config.dump();
    for (const auto& row : output.rows) {
      out << output.command;
      for (const auto& c : columns) out << '\t' << (row.contains(c) ? cell(row.at(c)) : "");
      out << '\t' << config_cell << '\n';
    }
    return out.str();
  }

  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> widths;
  for (const auto& c : columns) widths.push_back(c.size());
  for (const auto& row : output.rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      line.push_back(row.contains(columns[i]) ? table_cell(columns[i], row.at(columns[i])) : "-");
      widths[i] = std::max(widths[i], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i > 0) out << "  ";
      out << line[i];
      if (i + 1 < line.size()) out << std::string(widths[i] - line[i].size(), ' ');
    }
    out << '\n';
  };
  out << "# " << output.command << " " << config.dump() << '\n';
  emit(columns);
  for (const auto& line : cells) emit(line);
  return out.str();
}

}  // namespace textknn
