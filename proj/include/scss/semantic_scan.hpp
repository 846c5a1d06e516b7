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

// Two-phase Semantic Scan: fit background topics on the background corpus,
// then learn foreground topics on foreground documents with the background
// block held fixed.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "scss/corpus.hpp"
#include "scss/lda.hpp"

namespace scss {

enum class ScanVariant { kStatic, kDynamic, kEmerging };

std::string_view to_string(ScanVariant v);

struct ScanConfig {
  std::size_t num_background_topics = 25;
  std::size_t num_foreground_topics = 25;
  ScanVariant variant = ScanVariant::kEmerging;
  double alpha = 0.5;
  double beta_background = 0.01;
  double beta_foreground = 0.01;
  std::size_t background_sweeps = 500;
  std::size_t foreground_sweeps = 200;
  std::size_t fold_in_sweeps = 20;
  std::uint64_t seed = 0;

  static ScanConfig emerging(std::size_t background_topics, std::size_t foreground_topics);
  static ScanConfig dynamic(std::size_t foreground_topics);
  static ScanConfig static_topics(std::size_t background_topics);

  std::size_t num_topics() const noexcept { return num_background_topics + num_foreground_topics; }
  /// Symmetric hyperparameters over all num_topics() topics.
  Hyperparameters hyperparameters() const;
  /// Checks the topic counts against the variant.
  void validate() const;
};

struct BackgroundFit {
  TopicModel model;
  CountTables tables;
};

struct ForegroundFit {
  TopicModel model;
  CountTables tables;
  /// Smoothed theta over all topics, one per fitted document.
  std::vector<DocTopicEstimate> theta;
};

/// Collapsed Gibbs over the background documents only.
BackgroundFit fit_background(std::span<const Document> docs, const Vocabulary& vocabulary, const ScanConfig& config);
BackgroundFit fit_background(const Corpus& corpus, const ScanConfig& config);

/// Background model with no topics, used by the dynamic variant.
TopicModel empty_background_model(const Vocabulary& vocabulary, const ScanConfig& config);

/// Learns config.num_foreground_topics new topics on `docs` with the rows of
/// `background` frozen. `stream` separates independent fits that share a seed.
ForegroundFit fit_foreground(const TopicModel& background, std::span<const Document* const> docs,
                             const ScanConfig& config, std::uint64_t stream = 0);
ForegroundFit fit_foreground(const TopicModel& background, std::span<const Document> docs, const ScanConfig& config,
                             std::uint64_t stream = 0);

}  // namespace scss
