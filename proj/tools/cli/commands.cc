// Copyright 2026 The qconformal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.h"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/report_io.h"
#include "qconformal/errors.h"

namespace qconformal::cli {

namespace {

// A ConfigError raised while assembling the configuration is a usage
// error; anything thrown afterwards is a runtime failure.
struct GenerationFlags {
  std::optional<std::int64_t> samples;
  std::optional<int> min_depth;
  std::optional<int> max_depth;
  std::optional<int> shots;
  std::optional<std::string> bases;
  std::optional<std::string> features;
  std::optional<double> two_qubit_prob;
  std::optional<std::uint64_t> seed;
};

void add_generation_flags(CLI::App* cmd, GenerationFlags& f) {
  cmd->add_option("--samples", f.samples, "Number of circuits before dedup");
  cmd->add_option("--min-depth", f.min_depth, "Minimum circuit depth");
  cmd->add_option("--max-depth", f.max_depth, "Maximum circuit depth");
  cmd->add_option("--shots", f.shots, "Shots per basis (0 = exact probabilities)");
  cmd->add_option("--bases", f.bases, "Measurement bases: z or zxy");
  cmd->add_option("--features", f.features, "Feature mode: minimal or full");
  cmd->add_option("--two-qubit-prob", f.two_qubit_prob, "Probability of a CX layer");
  cmd->add_option("--seed", f.seed, "Generation seed");
}

void apply(const GenerationFlags& f, RunConfig& c) {
  auto& g = c.generation;
  if (f.samples) g.num_samples = *f.samples;
  if (f.min_depth) g.circuit.min_depth = *f.min_depth;
  if (f.max_depth) g.circuit.max_depth = *f.max_depth;
  if (f.shots) g.shots = *f.shots;
  if (f.bases) g.bases = parse_bases(*f.bases);
  if (f.features) {
    const auto mode = parse_feature_mode(*f.features);
    if (!mode) throw ConfigError("unknown feature mode '" + *f.features + "'");
    g.feature_mode = *mode;
  }
  if (f.two_qubit_prob) g.circuit.two_qubit_prob = *f.two_qubit_prob;
  if (f.seed) c.seeds.generation = *f.seed;
}

RunConfig base_config(const std::optional<std::string>& config_path) {
  RunConfig c;
  if (config_path) c = load_config_file(*config_path, c);
  return c;
}

// SOURCE_DATE_EPOCH pins the stamp for reproducible manifests.
std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("short write to " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path with_suffix(const std::string& prefix, const char* suffix) {
  return std::filesystem::path(prefix + suffix);
}

void check_run_config(const RunConfig& c) {
  for (double a : c.alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alphas must lie in (0, 1)");
  }
  if (c.alphas.empty()) throw ConfigError("alpha grid is empty");
  const auto& f = c.fractions;
  if (!(f.train > 0.0 && f.cal > 0.0 && f.test > 0.0) ||
      std::abs(f.train + f.cal + f.test - 1.0) > 1e-9) {
    throw ConfigError("fractions must be positive and sum to 1");
  }
  if (c.forest.num_trees < 1) throw ConfigError("trees must be >= 1");
  if (c.output.report.empty()) throw ConfigError("report output prefix is empty");
}

int cmd_generate(const RunConfig& config, std::ostream& out) {
  Dataset dataset = generate(config.generation, config.seeds.generation);
  dataset.manifest.generated_at = utc_timestamp();
  save(dataset, config.output.dataset);
  const auto paths = dataset_paths(config.output.dataset);
  out << "samples: " << dataset.size() << " kept of " << config.generation.num_samples
      << " generated (" << config.generation.num_samples - static_cast<std::int64_t>(dataset.size())
      << " feature duplicates dropped), d=" << dataset.target_dim() << "\n"
      << "checksum: " << dataset_checksum(dataset) << "\n"
      << "wrote " << paths.csv.string() << "\n"
      << "wrote " << paths.manifest.string() << "\n";
  return kExitOk;
}

int cmd_run(const RunConfig& config, std::ostream& out) {
  const Dataset dataset = config.data.empty()
                              ? generate(config.generation, config.seeds.generation)
                              : load(config.data);
  const PipelineResult result = run_pipeline(dataset, config);

  ReportDocument doc;
  doc.report = result.report;
  doc.n_train = result.splits.train.size();
  doc.run_id = config.run_id.empty()
                   ? std::filesystem::path(config.output.report).filename().string()
                   : config.run_id;

  const auto csv_path = with_suffix(config.output.report, ".csv");
  const auto json_path = with_suffix(config.output.report, ".json");
  write_text(csv_path, report_csv(result.report));
  write_text(json_path, report_json(doc, dataset, config));
  if (!config.output.model.empty()) {
    write_text(config.output.model, result.model.to_json());
  }

  out << "dataset: " << dataset.size() << " samples, d=" << dataset.target_dim()
      << ", checksum " << dataset_checksum(dataset) << "\n"
      << "split: train=" << result.splits.train.size() << " cal=" << result.splits.cal.size()
      << " test=" << result.splits.test.size() << "\n\n"
      << report_table(result.report) << "\n"
      << "wrote " << csv_path.string() << "\n"
      << "wrote " << json_path.string() << "\n";
  if (!config.output.model.empty()) out << "wrote " << config.output.model << "\n";
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_path,
               std::ostream& out) {
  std::string merged = "run_id," + std::string(kReportCsvHeader) + "\n";
  for (const auto& input : inputs) {
    ReportDocument doc = parse_report_json(read_text(input));
    if (doc.run_id.empty()) doc.run_id = std::filesystem::path(input).stem().string();
    for (const auto& cells : report_cells(doc.report)) {
      merged += doc.run_id;
      for (const auto& cell : cells) merged += "," + cell;
      merged += '\n';
    }
  }
  if (out_path.empty()) {
    out << merged;
  } else {
    write_text(out_path, merged);
    out << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

PipelineResult run_pipeline(const Dataset& dataset, const RunConfig& config) {
  PipelineResult result{split(dataset, config.fractions, config.seeds.split), {}, {}};
  const auto train = gather(dataset, result.splits.train);
  result.model = Forest::fit(train.X, train.Y, config.forest, config.seeds.train);
  result.report = evaluate(result.model, result.splits, dataset, config.alphas, config.norm);
  return result;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal prediction sets for simulated two-qubit measurement distributions",
               "qconformal"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;

  auto* gen = app.add_subcommand("generate", "Generate a dataset of random circuits");
  GenerationFlags gen_flags;
  std::optional<std::string> gen_out;
  add_generation_flags(gen, gen_flags);
  gen->add_option("--out", gen_out, "Output prefix (<prefix>.csv, <prefix>.manifest.json)");
  gen->add_option("--config", config_path, "RunConfig JSON file");

  auto* run = app.add_subcommand("run", "Split, fit, calibrate and report coverage");
  GenerationFlags run_gen_flags;
  add_generation_flags(run, run_gen_flags);
  std::optional<std::string> data, run_out, alphas, norm, fractions, model_out, run_id;
  std::optional<std::uint64_t> split_seed, train_seed;
  std::optional<int> trees, tree_max_depth, min_split, min_leaf, max_features;
  bool no_bootstrap = false;
  run->add_option("--data", data, "Dataset prefix; omit to generate inline");
  run->add_option("--out", run_out, "Report prefix (<prefix>.csv, <prefix>.json)");
  run->add_option("--alphas", alphas, "Comma-separated miscoverage levels");
  run->add_option("--norm", norm, "Residual norm: l2 or linf");
  run->add_option("--fractions", fractions, "train,cal,test fractions");
  run->add_option("--split-seed", split_seed, "Split seed");
  run->add_option("--train-seed", train_seed, "Forest seed");
  run->add_option("--trees", trees, "Number of trees");
  run->add_option("--tree-max-depth", tree_max_depth, "Tree depth limit (0 = none)");
  run->add_option("--min-samples-split", min_split, "Minimum samples to split a node");
  run->add_option("--min-samples-leaf", min_leaf, "Minimum samples per leaf");
  run->add_option("--max-features", max_features, "Features tried per split (0 = all)");
  run->add_flag("--no-bootstrap", no_bootstrap, "Train every tree on the full set");
  run->add_option("--model-out", model_out, "Write the fitted forest as JSON");
  run->add_option("--run-id", run_id, "Identifier echoed in the report");
  run->add_option("--config", config_path, "RunConfig JSON file");

  auto* report = app.add_subcommand("report", "Merge report JSON files into one CSV");
  std::vector<std::string> report_inputs;
  std::string report_out;
  report->add_option("reports", report_inputs, "Report JSON files")->required();
  report->add_option("--out", report_out, "Merged CSV path (default: stdout)");

  std::vector<const char*> argv{"qconformal"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  RunConfig config;
  try {
    if (gen->parsed() || run->parsed()) {
      config = base_config(config_path);
      apply(gen->parsed() ? gen_flags : run_gen_flags, config);
      validate_config(config.generation);
    }
    if (gen->parsed()) {
      if (gen_out) config.output.dataset = *gen_out;
      if (config.output.dataset.empty()) throw ConfigError("--out is required");
    }
    if (run->parsed()) {
      if (data) config.data = *data;
      if (run_out) config.output.report = *run_out;
      if (model_out) config.output.model = *model_out;
      if (run_id) config.run_id = *run_id;
      if (alphas) config.alphas = parse_number_list(*alphas);
      if (norm) {
        const auto n = parse_norm(*norm);
        if (!n) throw ConfigError("unknown norm '" + *norm + "'");
        config.norm = *n;
      }
      if (fractions) {
        const auto f = parse_number_list(*fractions);
        if (f.size() != 3) throw ConfigError("--fractions needs three values");
        config.fractions = {f[0], f[1], f[2]};
      }
      if (split_seed) config.seeds.split = *split_seed;
      if (train_seed) config.seeds.train = *train_seed;
      if (trees) config.forest.num_trees = *trees;
      if (tree_max_depth) config.forest.max_depth = *tree_max_depth;
      if (min_split) config.forest.min_samples_split = *min_split;
      if (min_leaf) config.forest.min_samples_leaf = *min_leaf;
      if (max_features) config.forest.max_features = *max_features;
      if (no_bootstrap) config.forest.bootstrap = false;
      check_run_config(config);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(config, out);
    if (run->parsed()) return cmd_run(config, out);
    return cmd_report(report_inputs, report_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace qconformal::cli
