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

// Semi-synthetic benchmark generation: a synthetic corpus drawn from the
// background generative process and leave-one-label-out outbreak injection.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scss/corpus.hpp"
#include "scss/lda.hpp"
#include "scss/rng.hpp"

namespace scss {

struct GeneratorConfig {
  std::size_t num_topics = 10;
  std::size_t vocab_size = 500;
  double docs_per_day = 100.0;
  /// Half-open day ranges; background strictly before foreground. An empty
  /// foreground range generates background documents only.
  Day background_begin = 0;
  Day background_end = 0;
  Day foreground_begin = 0;
  Day foreground_end = 0;
  double alpha = 0.1;
  double beta = 0.05;
  double mean_doc_length = 4.0;
  std::pair<double, double> eta{2.0, 2.0};
  std::uint64_t seed = 1;

  void validate() const;
};

struct GeneratedCorpus {
  Corpus corpus;
  /// Generating topics, in the background block.
  TopicModel truth;
};

/// Draws topics from Dir(beta) and documents with uniform timestamps and
/// uniform locations. Each document's label is its most frequent sampled
/// topic ("topic-NN"), standing in for a diagnosis code.
GeneratedCorpus generate_background(const GeneratorConfig& config, const LocationRegistry& registry);

/// `count` locations scattered uniformly in a county-sized box.
LocationRegistry synthetic_registry(std::size_t count, std::uint64_t seed);

enum class InjectionMode {
  kExact,       // uniform location over S
  kGenerative,  // per-location Beta(eta) severity with Bernoulli thinning
};

struct OutbreakParams {
  std::size_t duration = 30;
  std::size_t cases_per_day_slope = 3;  // day d receives slope * d cases
  std::size_t min_size = 5;
  std::size_t max_size = 15;
  std::vector<double> sparsities{0.5, 0.75, 1.0};
  InjectionMode mode = InjectionMode::kExact;
  std::pair<double, double> eta{2.0, 2.0};
  /// Days of history the detection window needs before the first outbreak
  /// day (window length - 1).
  std::size_t lead_days = 2;
  std::optional<Day> start_day;
  std::string id_prefix = "inj";
};

struct OutbreakGroundTruth {
  std::string label;
  LocationId center = 0;
  std::size_t size = 0;
  std::vector<LocationId> neighborhood;
  double p = 0.0;
  std::vector<LocationId> affected;  // sorted
  std::vector<double> severity;      // parallel to affected; generative mode only
  Day start_day = 0;
  std::size_t duration = 0;
  std::vector<std::vector<std::string>> injected;  // ids per outbreak day
  std::uint64_t seed = 0;

  std::size_t total_injected() const noexcept;
};

struct InjectionResult {
  Corpus corpus;
  OutbreakGroundTruth truth;
};

/// Adds an outbreak to the foreground of `corpus`, sampling text uniformly
/// with replacement from `pool`.
InjectionResult inject_outbreak(Corpus corpus, std::span<const Document> pool, const LocationRegistry& registry,
                                const OutbreakParams& params, Rng& rng);

struct Scenario {
  Corpus corpus;
  OutbreakGroundTruth truth;
};

/// The K most frequent labels, ties broken by name.
std::vector<std::string> top_labels(const Corpus& corpus, std::size_t k);

/// Removes every document carrying `label` from both halves of the corpus and
/// returns them.
std::vector<Document> strip_label(Corpus& corpus, const std::string& label);

/// Leave-one-label-out scenarios: labels.size() * outbreaks_per_label of them.
std::vector<Scenario> make_benchmark(const Corpus& labeled, const LocationRegistry& registry,
                                     std::span<const std::string> labels, std::size_t outbreaks_per_label,
                                     const OutbreakParams& params, std::uint64_t seed);

// Scenario bundle: corpus.jsonl, ground_truth.json and manifest.json in `dir`.
// The manifest always carries split_date so the corpus can be re-split; any
// fields of `manifest_json` (a JSON object) are kept alongside it.
void write_scenario(const std::filesystem::path& dir, const Scenario& scenario, const LocationRegistry& registry,
                    Day split_day, const std::string& manifest_json = "{}");
std::string ground_truth_json(const OutbreakGroundTruth& truth, const LocationRegistry& registry);
OutbreakGroundTruth parse_ground_truth(const std::string& json, const LocationRegistry& registry);
Scenario read_scenario(const std::filesystem::path& dir, const LocationRegistry& registry);

}  // namespace scss
