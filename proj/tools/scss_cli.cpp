// Copyright 2026 The SCSS Authors
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

// Command-line driver: generate, simulate, fit-background, detect, evaluate.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scss/detection.hpp"
#include "scss/outbreak.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "scss 0.1.0";

// Exit code for usage errors that CLI11 itself does not catch.
constexpr int kUsageError = 2;

struct UsageError : scss::Error {
  using scss::Error::Error;
};

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw scss::Error("cannot write " + path.string());
  out << text;
  if (!out) throw scss::Error("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw scss::Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Every option of `cmd` after parsing (config file, flags and defaults
/// merged), keyed by its long name.
json resolved_options(const CLI::App& cmd) {
  json j = json::object();
  for (const CLI::Option* opt : cmd.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names.front() == "help" || names.front() == "config") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      j[names.front()] = r.size() == 1 ? json(r.front()) : json(r);
    } else if (!opt->get_default_str().empty()) {
      j[names.front()] = opt->get_default_str();
    } else {
      j[names.front()] = nullptr;
    }
  }
  return j;
}

std::string manifest(const CLI::App& cmd, std::uint64_t seed, json extra = json::object()) {
  json j;
  j["tool"] = kVersion;
  j["command"] = cmd.get_name();
  j["seed"] = seed;
  j["config"] = resolved_options(cmd);
  for (auto& [k, v] : extra.items()) j[k] = v;
  return j.dump(2) + "\n";
}

scss::Method parse_method_or_throw(const std::string& name) {
  const auto m = scss::parse_method(name);
  if (!m) throw UsageError("unknown method '" + name + "'; valid methods: " + scss::method_names());
  return *m;
}

std::vector<scss::Method> parse_methods(const std::string& list) {
  if (list.empty() || list == "all") return {scss::all_methods().begin(), scss::all_methods().end()};
  std::vector<scss::Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_method_or_throw(item));
  }
  if (out.empty()) throw UsageError("no methods given; valid methods: " + scss::method_names());
  return out;
}

scss::LocationRegistry load_registry(const std::string& path) {
  if (path.empty()) throw UsageError("--registry is required");
  if (!fs::exists(path)) throw scss::Error("registry file not found: " + path);
  return scss::read_registry_csv_file(path);
}

// Options shared by commands that fit topics and run detection.
struct ModelOptions {
  std::size_t background_topics = 25;
  std::size_t foreground_topics = 25;
  double alpha = 0.5;
  double beta_background = 0.01;
  double beta_foreground = 0.01;
  std::size_t background_sweeps = 500;
  std::size_t foreground_sweeps = 200;
  std::size_t fold_in_sweeps = 20;

  void add_background(CLI::App* cmd) {
    cmd->add_option("--background-topics", background_topics, "Background topic count")->capture_default_str();
    cmd->add_option("--alpha", alpha, "Document-topic Dirichlet parameter")->capture_default_str();
    cmd->add_option("--beta-background", beta_background, "Background topic-word prior")->capture_default_str();
    cmd->add_option("--background-sweeps", background_sweeps, "Gibbs sweeps for the background fit")
        ->capture_default_str();
  }
  void add_foreground(CLI::App* cmd) {
    cmd->add_option("--foreground-topics", foreground_topics, "Foreground topic count")->capture_default_str();
    cmd->add_option("--beta-foreground", beta_foreground, "Foreground topic-word prior")->capture_default_str();
    cmd->add_option("--foreground-sweeps", foreground_sweeps, "Gibbs sweeps per foreground refit")
        ->capture_default_str();
    cmd->add_option("--fold-in-sweeps", fold_in_sweeps, "Gibbs sweeps when folding in a document")
        ->capture_default_str();
  }

  scss::ScanConfig scan(std::uint64_t seed) const {
    auto c = scss::ScanConfig::emerging(background_topics, foreground_topics);
    c.alpha = alpha;
    c.beta_background = beta_background;
    c.beta_foreground = beta_foreground;
    c.background_sweeps = background_sweeps;
    c.foreground_sweeps = foreground_sweeps;
    c.fold_in_sweeps = fold_in_sweeps;
    c.seed = seed;
    return c;
  }
};

struct DetectOptions {
  ModelOptions model;
  double sparsity = 0.5;
  std::size_t max_iterations = 10;
  double convergence = 0.01;
  std::size_t window = 3;
  double location_threshold = 0.5;
  std::size_t max_cluster = 0;

  void add(CLI::App* cmd) {
    model.add_background(cmd);
    model.add_foreground(cmd);
    cmd->add_option("--sparsity", sparsity, "Prior inclusion probability p")->capture_default_str();
    cmd->add_option("--max-iterations", max_iterations, "Alternating inference iterations")->capture_default_str();
    cmd->add_option("--convergence", convergence, "Stop when fewer than this fraction of assignments flip")
        ->capture_default_str();
    cmd->add_option("--window", window, "Detection window in days")->capture_default_str();
    cmd->add_option("--location-threshold", location_threshold, "Posterior above which a location is reported")
        ->capture_default_str();
    cmd->add_option("--max-cluster", max_cluster, "Largest neighborhood size (0: half the locations)")
        ->capture_default_str();
  }

  scss::DetectionConfig config(std::uint64_t seed, std::size_t threads) const {
    scss::DetectionConfig c;
    c.scan = model.scan(seed);
    c.sparsity = sparsity;
    c.max_iterations = max_iterations;
    c.convergence_fraction = convergence;
    c.window_days = window;
    c.location_threshold = location_threshold;
    c.max_cluster_size = max_cluster;
    c.threads = threads;
    return c;
  }
};

// Corpus source: either a scenario bundle or a JSONL file plus split date.
struct CorpusOptions {
  std::string scenario;
  std::string corpus;
  std::string split_date;

  void add(CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "Scenario bundle directory");
    cmd->add_option("--corpus", corpus, "Corpus JSONL file");
    cmd->add_option("--split-date", split_date, "First foreground date (YYYY-MM-DD) for --corpus");
  }

  scss::Scenario load(const scss::LocationRegistry& registry) const {
    if (!scenario.empty()) {
      if (!corpus.empty()) throw UsageError("give either --scenario or --corpus, not both");
      return scss::read_scenario(scenario, registry);
    }
    if (corpus.empty()) throw UsageError("one of --scenario or --corpus is required");
    if (split_date.empty()) throw UsageError("--corpus needs --split-date");
    const auto records = scss::read_records_jsonl_file(corpus);
    auto ingested = scss::ingest(records, registry, scss::parse_date(split_date));
    for (const auto& msg : ingested.rejected) std::cerr << "warning: " << msg << "\n";
    return {std::move(ingested.corpus), {}};
  }
};

int cmd_generate(const CLI::App& cmd, std::size_t locations, const scss::GeneratorConfig& gen_in,
                 std::size_t background_days, std::size_t foreground_days, const std::string& start,
                 const std::string& out) {
  scss::GeneratorConfig gen = gen_in;
  const scss::Day first = scss::parse_date(start);
  gen.background_begin = first;
  gen.background_end = first + static_cast<scss::Day>(background_days);
  gen.foreground_begin = gen.background_end;
  gen.foreground_end = gen.foreground_begin + static_cast<scss::Day>(foreground_days);
  const auto registry = scss::synthetic_registry(locations, scss::derive_seed(gen.seed, 0x2e6));
  const auto generated = scss::generate_background(gen, registry);

  std::ostringstream reg;
  scss::write_registry_csv(reg, registry);
  write_file(fs::path(out) / "registry.csv", reg.str());
  std::ostringstream corpus;
  scss::write_records_jsonl(corpus, scss::to_records(generated.corpus, registry));
  write_file(fs::path(out) / "corpus.jsonl", corpus.str());
  std::ostringstream model;
  scss::save_checkpoint(model, generated.truth);
  write_file(fs::path(out) / "true_topics.txt", model.str());
  const std::string split = scss::format_date(gen.foreground_begin);
  write_file(fs::path(out) / "manifest.json", manifest(cmd, gen.seed, {{"split_date", split}}));
  std::cout << "wrote " << generated.corpus.size() << " documents over " << registry.size()
            << " locations; split date " << split << "\n";
  return 0;
}

int cmd_simulate(const CLI::App& cmd, const std::string& corpus_path, const std::string& registry_path,
                 const std::string& split_date, std::size_t labels, std::size_t per_label,
                 const scss::OutbreakParams& params, std::uint64_t seed, const std::string& out) {
  const auto registry = load_registry(registry_path);
  if (corpus_path.empty()) throw UsageError("--corpus is required");
  if (split_date.empty()) throw UsageError("--split-date is required");
  const scss::Day split = scss::parse_date(split_date);
  auto ingested = scss::ingest(scss::read_records_jsonl_file(corpus_path), registry, split);
  for (const auto& msg : ingested.rejected) std::cerr << "warning: " << msg << "\n";
  const auto chosen = scss::top_labels(ingested.corpus, labels);
  const auto scenarios = scss::make_benchmark(ingested.corpus, registry, chosen, per_label, params, seed);

  json index = json::array();
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "scenario-%03zu", i);
    json m;
    m["tool"] = kVersion;
    m["label"] = scenarios[i].truth.label;
    m["benchmark_seed"] = seed;
    scss::write_scenario(fs::path(out) / name, scenarios[i], registry, split, m.dump());
    index.push_back({{"dir", name}, {"label", scenarios[i].truth.label}});
  }
  write_file(fs::path(out) / "manifest.json", manifest(cmd, seed, {{"scenarios", index}}));
  std::cout << "wrote " << scenarios.size() << " scenarios to " << out << "\n";
  return 0;
}

int cmd_fit_background(const CLI::App& cmd, const CorpusOptions& source, const std::string& registry_path,
                       const ModelOptions& model, std::uint64_t seed, const std::string& out) {
  const auto registry = load_registry(registry_path);
  const auto scenario = source.load(registry);
  auto config = scss::ScanConfig::static_topics(model.background_topics);
  config.alpha = model.alpha;
  config.beta_background = model.beta_background;
  config.background_sweeps = model.background_sweeps;
  config.seed = seed;
  const auto fit = scss::fit_background(scenario.corpus, config);
  std::ostringstream text;
  scss::save_checkpoint(text, fit.model);
  write_file(out, text.str());
  write_file(out + ".manifest.json", manifest(cmd, seed));
  std::cout << "wrote " << fit.model.num_topics() << " background topics to " << out << "\n";
  return 0;
}

std::optional<scss::TopicModel> load_checkpoint_for(const std::string& path, const scss::Corpus& corpus,
                                                    const DetectOptions& opts) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw scss::Error("cannot read checkpoint " + path);
  auto model = scss::load_checkpoint(in);
  if (model.vocab_hash != corpus.vocabulary.hash() || model.vocab_size != corpus.vocabulary.size()) {
    throw scss::Error("checkpoint " + path + " was fitted on a different vocabulary");
  }
  if (model.num_foreground_topics != 0) throw scss::Error("checkpoint " + path + " has foreground topics");
  if (model.num_background_topics != opts.model.background_topics) {
    throw UsageError("checkpoint has " + std::to_string(model.num_background_topics) +
                     " topics but --background-topics is " + std::to_string(opts.model.background_topics));
  }
  return model;
}

int cmd_detect(const CLI::App& cmd, const CorpusOptions& source, const std::string& registry_path,
               const std::string& method_name, const std::string& checkpoint, const DetectOptions& opts,
               std::uint64_t seed, std::size_t threads, const std::string& from, const std::string& to,
               const std::string& out) {
  const scss::Method method = parse_method_or_throw(method_name);
  const auto registry = load_registry(registry_path);
  const auto scenario = source.load(registry);
  if (scenario.corpus.foreground.empty()) throw scss::Error("corpus has no foreground documents");
  auto background = load_checkpoint_for(checkpoint, scenario.corpus, opts);
  const scss::Detector detector(scenario.corpus, registry, opts.config(seed, threads), std::move(background));

  scss::Day lo = scenario.corpus.foreground.front().day;
  scss::Day hi = lo;
  for (const auto& d : scenario.corpus.foreground) {
    lo = std::min(lo, d.day);
    hi = std::max(hi, d.day);
  }
  if (!from.empty()) lo = scss::parse_date(from);
  if (!to.empty()) hi = scss::parse_date(to);
  if (hi < lo) throw UsageError("--to is before --from");

  std::vector<scss::Day> skipped;
  const auto outputs = detector.run_windows(method, lo, hi, &skipped);
  json skipped_dates = json::array();
  for (scss::Day d : skipped) skipped_dates.push_back(scss::format_date(d));
  if (!skipped.empty()) {
    std::cerr << "skipped " << skipped.size() << " day(s) whose window starts before the foreground\n";
  }
  std::ostringstream csv;
  scss::write_detections_csv(csv, method, outputs, registry);
  const std::string name = "detections_" + std::string(scss::to_string(method)) + ".csv";
  write_file(fs::path(out) / name, csv.str());
  write_file(fs::path(out) / "manifest.json", manifest(cmd, seed, {{"skipped_dates", skipped_dates}}));
  std::cout << "wrote " << outputs.size() << " detection rows to " << (fs::path(out) / name).string() << "\n";
  return 0;
}

std::vector<fs::path> scenario_dirs(const std::string& root) {
  if (!fs::is_directory(root)) throw scss::Error("scenario directory not found: " + root);
  std::vector<fs::path> dirs;
  if (fs::exists(fs::path(root) / "ground_truth.json")) dirs.push_back(root);
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "ground_truth.json")) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw scss::Error("no scenario bundles under " + root);
  return dirs;
}

int cmd_evaluate(const CLI::App& cmd, const std::string& root, const std::string& registry_path,
                 const std::string& method_list, const DetectOptions& opts, std::uint64_t seed, std::size_t threads,
                 const std::string& out) {
  const auto methods = parse_methods(method_list);
  const auto registry = load_registry(registry_path);
  const auto dirs = scenario_dirs(root);
  std::vector<scss::Scenario> scenarios;
  json names = json::array();
  for (const auto& d : dirs) {
    scenarios.push_back(scss::read_scenario(d, registry));
    if (scenarios.back().truth.duration == 0) throw scss::Error(d.string() + " carries no outbreak");
    names.push_back(d.filename().string());
  }
  const auto evals = scss::evaluate_benchmark(scenarios, registry, methods, opts.config(seed, threads));

  // metrics.csv holds the across-scenario mean; per-scenario rows go to metrics/.
  std::ostringstream metrics;
  scss::write_metrics_header(metrics);
  for (const auto& e : evals) scss::write_metrics_rows(metrics, e.method, scss::mean_by_day(e.scenarios));
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    std::ostringstream one;
    scss::write_metrics_header(one);
    for (const auto& e : evals) scss::write_metrics_rows(one, e.method, e.scenarios[s]);
    write_file(fs::path(out) / "metrics" / (names[s].get<std::string>() + ".csv"), one.str());
  }
  write_file(fs::path(out) / "metrics.csv", metrics.str());

  std::ostringstream power;
  scss::write_power_header(power);
  json curve_errors = json::object();
  for (const auto& e : evals) {
    if (e.curve_error.empty()) {
      scss::write_power_rows(power, e.method, e.curve);
    } else {
      curve_errors[std::string(scss::to_string(e.method))] = e.curve_error;
      std::cerr << "warning: no power curve for " << scss::to_string(e.method) << ": " << e.curve_error << "\n";
    }
  }
  write_file(fs::path(out) / "power.csv", power.str());
  write_file(fs::path(out) / "manifest.json",
             manifest(cmd, seed, {{"scenarios", names}, {"power_curve_errors", curve_errors}}));
  std::cout << "evaluated " << scenarios.size() << " scenarios x " << methods.size() << " methods into " << out
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatially compact semantic scan: event detection in spatio-temporal text"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "key=value config file; command-line flags take precedence");
  app.require_subcommand(1);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic labeled corpus and location registry");
  scss::GeneratorConfig gen;
  std::size_t gen_locations = 50, gen_bg_days = 120, gen_fg_days = 40;
  std::string gen_start = "2020-01-01", gen_out;
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();
  gen_cmd->add_option("--locations", gen_locations, "Number of locations")->capture_default_str();
  gen_cmd->add_option("--topics", gen.num_topics, "Number of generating topics")->capture_default_str();
  gen_cmd->add_option("--vocab", gen.vocab_size, "Vocabulary size")->capture_default_str();
  gen_cmd->add_option("--docs-per-day", gen.docs_per_day, "Mean documents per day")->capture_default_str();
  gen_cmd->add_option("--doc-length", gen.mean_doc_length, "Mean tokens per document")->capture_default_str();
  gen_cmd->add_option("--alpha", gen.alpha, "Document-topic Dirichlet parameter")->capture_default_str();
  gen_cmd->add_option("--beta", gen.beta, "Topic-word Dirichlet parameter")->capture_default_str();
  gen_cmd->add_option("--background-days", gen_bg_days, "Days before the split")->capture_default_str();
  gen_cmd->add_option("--foreground-days", gen_fg_days, "Days from the split on")->capture_default_str();
  gen_cmd->add_option("--start-date", gen_start, "First day")->capture_default_str();

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Inject semi-synthetic outbreaks into a labeled corpus");
  std::string sim_corpus, sim_registry, sim_split, sim_out, sim_mode = "exact";
  std::size_t sim_labels = 5, sim_per_label = 20;
  std::uint64_t sim_seed = 0;
  scss::OutbreakParams params;
  sim_cmd->add_option("--seed", sim_seed, "Random seed")->required();
  sim_cmd->add_option("--corpus", sim_corpus, "Labeled corpus JSONL");
  sim_cmd->add_option("--registry", sim_registry, "Location registry CSV");
  sim_cmd->add_option("--split-date", sim_split, "First foreground date (YYYY-MM-DD)");
  sim_cmd->add_option("--out", sim_out, "Output directory")->required();
  sim_cmd->add_option("--labels", sim_labels, "Most frequent labels to hold out")->capture_default_str();
  sim_cmd->add_option("--outbreaks-per-label", sim_per_label, "Outbreaks per held-out label")->capture_default_str();
  sim_cmd->add_option("--duration", params.duration, "Outbreak length in days")->capture_default_str();
  sim_cmd->add_option("--slope", params.cases_per_day_slope, "Cases on day d are slope * d")->capture_default_str();
  sim_cmd->add_option("--min-size", params.min_size, "Smallest outbreak neighborhood")->capture_default_str();
  sim_cmd->add_option("--max-size", params.max_size, "Largest outbreak neighborhood")->capture_default_str();
  sim_cmd->add_option("--sparsities", params.sparsities, "Sparsity values drawn uniformly")
      ->capture_default_str()
      ->delimiter(',');
  sim_cmd->add_option("--mode", sim_mode, "Injection mode: exact or generative")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "generative"}));

  // fit-background
  auto* fit_cmd = app.add_subcommand("fit-background", "Fit background topics and write a checkpoint");
  CorpusOptions fit_source;
  std::string fit_registry, fit_out;
  std::uint64_t fit_seed = 0;
  ModelOptions fit_model;
  fit_source.add(fit_cmd);
  fit_cmd->add_option("--registry", fit_registry, "Location registry CSV");
  fit_cmd->add_option("--out", fit_out, "Checkpoint path")->required();
  fit_cmd->add_option("--seed", fit_seed, "Random seed")->capture_default_str();
  fit_cmd->add_option("--topics", fit_model.background_topics, "Background topic count")->capture_default_str();
  fit_cmd->add_option("--alpha", fit_model.alpha, "Document-topic Dirichlet parameter")->capture_default_str();
  fit_cmd->add_option("--beta", fit_model.beta_background, "Topic-word prior")->capture_default_str();
  fit_cmd->add_option("--sweeps", fit_model.background_sweeps, "Gibbs sweeps")->capture_default_str();

  // detect
  auto* det_cmd = app.add_subcommand("detect", "Run one method over a range of days");
  CorpusOptions det_source;
  DetectOptions det_opts;
  std::string det_registry, det_method = "scss", det_checkpoint, det_from, det_to, det_out;
  std::uint64_t det_seed = 0;
  std::size_t det_threads = 1;
  det_source.add(det_cmd);
  det_cmd->add_option("--registry", det_registry, "Location registry CSV");
  det_cmd->add_option("--method", det_method, "One of: " + scss::method_names())->capture_default_str();
  det_cmd->add_option("--checkpoint", det_checkpoint, "Background topic checkpoint from fit-background");
  det_cmd->add_option("--seed", det_seed, "Random seed")->required();
  det_cmd->add_option("--threads", det_threads, "Worker threads")->capture_default_str();
  det_cmd->add_option("--from", det_from, "First evaluated date (default: first foreground day)");
  det_cmd->add_option("--to", det_to, "Last evaluated date (default: last foreground day)");
  det_cmd->add_option("--out", det_out, "Output directory")->required();
  det_opts.add(det_cmd);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Metrics and power curves over scenario bundles");
  DetectOptions eval_opts;
  std::string eval_root, eval_registry, eval_methods = "all", eval_out;
  std::uint64_t eval_seed = 0;
  std::size_t eval_threads = 1;
  eval_cmd->add_option("--scenarios", eval_root, "Directory of scenario bundles (or one bundle)")->required();
  eval_cmd->add_option("--registry", eval_registry, "Location registry CSV");
  eval_cmd->add_option("--methods", eval_methods, "Comma-separated methods or 'all'")->capture_default_str();
  eval_cmd->add_option("--seed", eval_seed, "Random seed")->capture_default_str();
  eval_cmd->add_option("--threads", eval_threads, "Worker threads (one scenario each)")->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "Output directory")->required();
  eval_opts.add(eval_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) {
      return cmd_generate(*gen_cmd, gen_locations, gen, gen_bg_days, gen_fg_days, gen_start, gen_out);
    }
    if (sim_cmd->parsed()) {
      params.mode = sim_mode == "generative" ? scss::InjectionMode::kGenerative : scss::InjectionMode::kExact;
      return cmd_simulate(*sim_cmd, sim_corpus, sim_registry, sim_split, sim_labels, sim_per_label, params, sim_seed,
                          sim_out);
    }
    if (fit_cmd->parsed()) return cmd_fit_background(*fit_cmd, fit_source, fit_registry, fit_model, fit_seed, fit_out);
    if (det_cmd->parsed()) {
      return cmd_detect(*det_cmd, det_source, det_registry, det_method, det_checkpoint, det_opts, det_seed,
                        det_threads, det_from, det_to, det_out);
    }
    if (eval_cmd->parsed()) {
      return cmd_evaluate(*eval_cmd, eval_root, eval_registry, eval_methods, eval_opts, eval_seed, eval_threads,
                          eval_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
