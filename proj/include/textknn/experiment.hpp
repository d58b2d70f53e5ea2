#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "textknn/bench.hpp"
#include "textknn/data.hpp"
#include "textknn/distance.hpp"

namespace textknn {

enum class TiePolicy { Optimistic, Pessimistic, Expected, DistanceInformed };
enum class OutputFormat { Json, Tsv, Table };

std::string_view to_string(TiePolicy policy);
TiePolicy parse_tie_policy(std::string_view name);
std::string_view to_string(OutputFormat format);
OutputFormat parse_output_format(std::string_view name);
std::string_view to_string(LengthFilter filter);
LengthFilter parse_length_filter(std::string_view name);

// Everything needed to rerun an experiment. Embedded in every report.
struct ExperimentConfig {
  DistanceSpec distance;
  std::size_t k = 2;
  TiePolicy tie_policy = TiePolicy::Expected;

  std::string train_path;
  std::string test_path;
  bool header = false;

  // fewshot uses few_shot.shots_per_class; bench iterates shots_grid, where
  // 0 stands for the full training set.
  FewShotPlan few_shot;
  std::vector<std::size_t> shots_grid;
  std::vector<Method> methods;
  // Ablation variants; empty selects the default grid.
  std::vector<std::string> variants;

  std::size_t workers = 1;
  OutputFormat format = OutputFormat::Json;
  std::string output_path;  // empty writes to stdout
};

nlohmann::ordered_json to_json(const ExperimentConfig& config);
// Missing keys keep their defaults. Throws UsageError on bad values.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

// Throws UsageError describing the first problem found.
void validate(const ExperimentConfig& config);

// Result of one CLI command: a list of flat rows plus the resolved config.
struct ExperimentOutput {
  std::string command;
  ExperimentConfig config;
  std::vector<nlohmann::ordered_json> rows;
};

// Keys holding wall-clock measurements; everything else is deterministic.
inline constexpr std::string_view kTimingKeys[] = {"wall_time_seconds", "docs_per_second"};

// Accuracy under the configured tie policy.
double headline_accuracy(const EvaluationReport& report, TiePolicy policy);

struct AblationVariant {
  std::string name;         // e.g. "n=3", "atmost:n=3", "split:n=0"
  std::string description;  // human-readable row label
  PreprocessConfig config;
};

// Syntax: [split:][atmost:]n=<int>. `base` supplies the punctuation set and
// lowercase flag.
AblationVariant parse_ablation_variant(std::string_view name, const PreprocessConfig& base = {});
// n in {3, 0, 1, 2, 4, 10} keeping longer tokens, keep-at-most n=3, and
// whitespace-split only with n in {3, 0}.
std::vector<AblationVariant> default_ablation_grid(const PreprocessConfig& base = {});

ExperimentOutput cmd_evaluate(const ExperimentConfig& config);
ExperimentOutput cmd_fewshot(const ExperimentConfig& config);
ExperimentOutput cmd_ablate(const ExperimentConfig& config);
ExperimentOutput cmd_bench(const ExperimentConfig& config);

// Dispatches on the command name stored in a report.
ExperimentOutput run_command(std::string_view command, const ExperimentConfig& config);

// json: one object {command, config, results}; tsv: header line plus one row
// per result; table: aligned text with accuracies at 3 decimals.
std::string render(const ExperimentOutput& output, OutputFormat format);

}  // namespace textknn
