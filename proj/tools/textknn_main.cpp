// textknn: KNN text classification with the bag-of-words (simple) and
// compression (gzip) distances.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "textknn/data.hpp"
#include "textknn/experiment.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Flags {
  std::string method = "simple";
  std::string tie_policy = "expected";
  std::string length_filter = "keep_longer";
  std::string separator = "space";
  std::string format = "json";
  std::size_t min_token_len = 3;
  bool no_normalize = false;
  bool no_lowercase = false;
  std::string punctuation = ".,?!";
  std::vector<std::string> methods;
};

void add_common(CLI::App* cmd, textknn::ExperimentConfig& config, Flags& flags) {
  cmd->add_option("--train", config.train_path, "Training corpus CSV (label,text)")->required();
  cmd->add_option("--test", config.test_path, "Test corpus CSV (label,text)")->required();
  cmd->add_flag("--header", config.header, "Skip the first CSV row");
  cmd->add_option("--method", flags.method, "Distance: simple | gzip")->capture_default_str();
  cmd->add_option("--k", config.k, "Number of neighbors")->capture_default_str();
  cmd->add_option("--tie-policy", flags.tie_policy,
                  "Headline accuracy: optimistic | pessimistic | expected | distance_informed")
      ->capture_default_str();
  cmd->add_option("--min-token-len", flags.min_token_len, "Token length threshold n")->capture_default_str();
  cmd->add_option("--length-filter", flags.length_filter, "keep_longer (len > n) | keep_at_most (len <= n)")
      ->capture_default_str();
  cmd->add_flag("--no-normalize", flags.no_normalize, "Only split on whitespace (no punctuation removal, no case folding)");
  cmd->add_flag("--no-lowercase", flags.no_lowercase, "Keep case");
  cmd->add_option("--punctuation", flags.punctuation, "Characters replaced by spaces")->capture_default_str();
  cmd->add_option("--level", config.distance.ncd.level, "gzip compression level")->capture_default_str();
  cmd->add_option("--separator", flags.separator, "gzip pair concatenation: space | none")->capture_default_str();
  cmd->add_option("--seed", config.few_shot.base_seed, "Base seed; run r uses seed + r")->capture_default_str();
  cmd->add_option("--runs", config.few_shot.n_runs, "Few-shot runs")->capture_default_str();
  cmd->add_option("--workers", config.workers, "Threads for classifying test documents")->capture_default_str();
  cmd->add_option("--format", flags.format, "json | tsv | table")->capture_default_str();
  cmd->add_option("--output", config.output_path, "Output file (default: stdout)");
}

void resolve(textknn::ExperimentConfig& config, const Flags& flags) {
  using namespace textknn;
  config.distance.method = parse_method(flags.method);
  config.tie_policy = parse_tie_policy(flags.tie_policy);
  config.format = parse_output_format(flags.format);
  PreprocessConfig& pre = config.distance.preprocess;
  pre.min_token_len_exclusive = flags.min_token_len;
  pre.length_filter = parse_length_filter(flags.length_filter);
  pre.normalize = !flags.no_normalize;
  pre.lowercase = !flags.no_lowercase;
  pre.punctuation_to_space = flags.punctuation;
  if (flags.separator == "space") {
    config.distance.ncd.space_separator = true;
  } else if (flags.separator == "none") {
    config.distance.ncd.space_separator = false;
  } else {
    throw UsageError("--separator must be space or none");
  }
  for (const auto& m : flags.methods) config.methods.push_back(parse_method(m));
}

void emit(const textknn::ExperimentOutput& output) {
  const std::string text = textknn::render(output, output.config.format);
  if (output.config.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output.config.output_path, std::ios::binary);
  if (!out) throw textknn::DataError("cannot write " + output.config.output_path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KNN text classification with bag-of-words and gzip distances"};
  app.require_subcommand(1);

  textknn::ExperimentConfig config;
  Flags flags;

  auto* evaluate = app.add_subcommand("evaluate", "Full training set evaluation");
  add_common(evaluate, config, flags);

  auto* fewshot = app.add_subcommand("fewshot", "Seeded n-shot runs and their mean");
  add_common(fewshot, config, flags);
  fewshot->add_option("--shots", config.few_shot.shots_per_class, "Training documents per class")
      ->capture_default_str();

  auto* ablate = app.add_subcommand("ablate", "Preprocessing variants of the simple distance");
  add_common(ablate, config, flags);
  ablate->add_option("--variant", config.variants,
                     "Variant [split:][atmost:]n=<int>; repeatable (default: the 9-row grid)");

  auto* bench = app.add_subcommand("bench", "Accuracy and wall time over methods x shots");
  add_common(bench, config, flags);
  bench->add_option("--methods", flags.methods, "Methods to time (default: simple,gzip)")->delimiter(',');
  bench->add_option("--shots", config.shots_grid, "Shots per class; 0 = full training set (default: 0)")
      ->delimiter(',');

  std::string rerun_path;
  std::string rerun_output;
  auto* rerun = app.add_subcommand("rerun", "Repeat the experiment embedded in a JSON report");
  rerun->add_option("report", rerun_path, "JSON report written by this tool")->required();
  rerun->add_option("--output", rerun_output, "Output file (default: the report's own setting)");

  std::string convert_in;
  std::string convert_out;
  std::size_t label_column = 0;
  std::vector<std::size_t> text_columns{1};
  bool convert_header = false;
  auto* convert = app.add_subcommand("convert", "Rewrite a multi-column CSV as label,text");
  convert->add_option("input", convert_in, "Source CSV")->required();
  convert->add_option("output", convert_out, "Destination CSV")->required();
  convert->add_option("--label-column", label_column, "0-based label column")->capture_default_str();
  convert->add_option("--text-columns", text_columns, "0-based text columns joined by spaces")
      ->delimiter(',')
      ->capture_default_str();
  convert->add_flag("--header", convert_header, "Skip the first CSV row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*convert) {
      const std::string content = textknn::read_file(convert_in);
      const auto corpus = textknn::convert_columns(content, label_column, text_columns, {convert_header}, convert_in);
      textknn::save_corpus(convert_out, corpus);
      std::cerr << "wrote " << corpus.size() << " documents to " << convert_out << "\n";
      return 0;
    }
    if (*rerun) {
      nlohmann::json report;
      try {
        report = nlohmann::json::parse(textknn::read_file(rerun_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw textknn::DataError(rerun_path + ": not a JSON report: " + e.what());
      }
      if (!report.contains("command") || !report.contains("config")) {
        throw textknn::DataError(rerun_path + ": report lacks command/config");
      }
      auto embedded = textknn::experiment_config_from_json(report.at("config"));
      if (!rerun_output.empty()) embedded.output_path = rerun_output;
      emit(textknn::run_command(report.at("command").get<std::string>(), embedded));
      return 0;
    }

    resolve(config, flags);
    std::string command = app.get_subcommands().front()->get_name();
    emit(textknn::run_command(command, config));
    return 0;
  } catch (const textknn::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
