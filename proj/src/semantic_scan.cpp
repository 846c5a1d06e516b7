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

#include "scss/semantic_scan.hpp"

namespace scss {

namespace {
constexpr std::uint64_t kBackgroundStream = 0xb6;
constexpr std::uint64_t kForegroundStream = 0xf6;
}  // namespace

std::string_view to_string(ScanVariant v) {
  switch (v) {
    case ScanVariant::kStatic:
      return "static";
    case ScanVariant::kDynamic:
      return "dynamic";
    case ScanVariant::kEmerging:
      return "emerging";
  }
  return "unknown";
}

ScanConfig ScanConfig::emerging(std::size_t background_topics, std::size_t foreground_topics) {
  ScanConfig c;
  c.variant = ScanVariant::kEmerging;
  c.num_background_topics = background_topics;
  c.num_foreground_topics = foreground_topics;
  return c;
}

ScanConfig ScanConfig::dynamic(std::size_t foreground_topics) {
  ScanConfig c;
  c.variant = ScanVariant::kDynamic;
  c.num_background_topics = 0;
  c.num_foreground_topics = foreground_topics;
  return c;
}

ScanConfig ScanConfig::static_topics(std::size_t background_topics) {
  ScanConfig c;
  c.variant = ScanVariant::kStatic;
  c.num_background_topics = background_topics;
  c.num_foreground_topics = 0;
  return c;
}

Hyperparameters ScanConfig::hyperparameters() const {
  return Hyperparameters::symmetric(num_topics(), alpha, beta_background, beta_foreground);
}

void ScanConfig::validate() const {
  switch (variant) {
    case ScanVariant::kStatic:
      if (num_foreground_topics != 0 || num_background_topics == 0) {
        throw Error("static scan needs background topics and no foreground topics");
      }
      break;
    case ScanVariant::kDynamic:
      if (num_background_topics != 0 || num_foreground_topics == 0) {
        throw Error("dynamic scan needs foreground topics and no background topics");
      }
      break;
    case ScanVariant::kEmerging:
      if (num_background_topics == 0 || num_foreground_topics == 0) {
        throw Error("emerging scan needs both background and foreground topics");
      }
      break;
  }
  if (!(alpha > 0.0) || !(beta_background > 0.0) || !(beta_foreground > 0.0)) {
    throw Error("hyperparameters must be strictly positive");
  }
}

BackgroundFit fit_background(std::span<const Document> docs, const Vocabulary& vocabulary, const ScanConfig& config) {
  const std::size_t tb = config.num_background_topics;
  if (tb == 0) throw Error("fit_background needs at least one background topic");
  if (docs.empty()) throw Error("fit_background: background corpus is empty");
  const auto hyper = Hyperparameters::symmetric(tb, config.alpha, config.beta_background, config.beta_foreground);
  Rng rng(derive_seed(config.seed, kBackgroundStream));
  const TopicRange all{0, tb};
  BackgroundFit fit;
  fit.tables = initialize_tables(docs, vocabulary.size(), tb, 0, all, rng);
  for (std::size_t s = 0; s < config.background_sweeps; ++s) gibbs_sweep(fit.tables, hyper, all, nullptr, rng);
  fit.model = map_estimates(fit.tables, hyper).model;
  fit.model.vocab_hash = vocabulary.hash();
  return fit;
}

BackgroundFit fit_background(const Corpus& corpus, const ScanConfig& config) {
  return fit_background(corpus.background, corpus.vocabulary, config);
}

TopicModel empty_background_model(const Vocabulary& vocabulary, const ScanConfig& config) {
  TopicModel m;
  m.vocab_size = vocabulary.size();
  m.vocab_hash = vocabulary.hash();
  m.hyper = Hyperparameters::symmetric(0, config.alpha, config.beta_background, config.beta_foreground);
  return m;
}

ForegroundFit fit_foreground(const TopicModel& background, std::span<const Document* const> docs,
                             const ScanConfig& config, std::uint64_t stream) {
  const std::size_t tb = background.num_topics();
  const std::size_t tf = config.num_foreground_topics;
  if (tb != config.num_background_topics) throw Error("background model topic count does not match the config");
  if (tb + tf == 0) throw Error("fit_foreground needs at least one topic");
  const auto hyper = config.hyperparameters();
  const FrozenTopics frozen = background.freeze(tb);
  const TopicRange all{0, tb + tf};

  Rng rng(derive_seed(config.seed, kForegroundStream, stream));
  std::vector<const std::vector<WordId>*> tokens;
  tokens.reserve(docs.size());
  for (const auto* d : docs) tokens.push_back(&d->tokens);

  ForegroundFit fit;
  fit.tables = initialize_tables(tokens, background.vocab_size, tb, tf, all, rng);
  if (!docs.empty()) {
    for (std::size_t s = 0; s < config.foreground_sweeps; ++s) gibbs_sweep(fit.tables, hyper, all, &frozen, rng);
  }
  auto estimates = map_estimates(fit.tables, hyper, &frozen);
  fit.theta = std::move(estimates.theta);
  if (tf == 0) {
    fit.model = background;
  } else {
    fit.model = std::move(estimates.model);
    fit.model.vocab_hash = background.vocab_hash;
  }
  return fit;
}

ForegroundFit fit_foreground(const TopicModel& background, std::span<const Document> docs, const ScanConfig& config,
                             std::uint64_t stream) {
  std::vector<const Document*> ptrs;
  ptrs.reserve(docs.size());
  for (const auto& d : docs) ptrs.push_back(&d);
  return fit_foreground(background, ptrs, config, stream);
}

}  // namespace scss
