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

// Collapsed Gibbs sampling for LDA over a contiguous topic index range, with
// an optional block of frozen topics whose word distributions are held fixed.
//
// Topics [0, T_b) form the background block and [T_b, T_b + T_f) the
// foreground block. The background block uses beta_background as its word
// prior and the foreground block uses beta_foreground.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "scss/corpus.hpp"
#include "scss/rng.hpp"

namespace scss {

using TopicId = std::uint32_t;

/// Half-open range of topic indices.
struct TopicRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return end <= begin; }
  bool contains(std::size_t k) const noexcept { return k >= begin && k < end; }
  bool operator==(const TopicRange&) const = default;
};

struct Hyperparameters {
  std::vector<double> alpha;  // one entry per topic
  double beta_background = 0.01;
  double beta_foreground = 0.01;

  static Hyperparameters symmetric(std::size_t num_topics, double alpha, double beta_background,
                                   double beta_foreground);
  /// Throws Error unless every entry is strictly positive.
  void validate() const;
  double alpha_sum(TopicRange range) const;
};

/// Sufficient statistics of a collapsed Gibbs chain.
///
/// topic_word is stored word-major (index w * T + k) so the per-token inner
/// loop over topics is contiguous.
struct CountTables {
  std::size_t num_background_topics = 0;
  std::size_t num_foreground_topics = 0;
  std::size_t vocab_size = 0;
  /// Topics the chain was initialised and sampled over.
  TopicRange sampled_topics;
  std::vector<std::vector<WordId>> words;
  std::vector<std::vector<TopicId>> assignments;
  std::vector<std::int32_t> doc_topic;    // docs x T
  std::vector<std::int32_t> topic_word;   // V x T
  std::vector<std::int32_t> topic_total;  // T

  std::size_t num_topics() const noexcept { return num_background_topics + num_foreground_topics; }
  std::size_t num_docs() const noexcept { return words.size(); }
  std::int32_t& n_doc_topic(std::size_t doc, std::size_t k) { return doc_topic[doc * num_topics() + k]; }
  std::int32_t n_doc_topic(std::size_t doc, std::size_t k) const { return doc_topic[doc * num_topics() + k]; }
  std::int32_t& n_topic_word(std::size_t k, std::size_t w) { return topic_word[w * num_topics() + k]; }
  std::int32_t n_topic_word(std::size_t k, std::size_t w) const { return topic_word[w * num_topics() + k]; }
  double word_prior(std::size_t k, const Hyperparameters& hyper) const {
    return k < num_background_topics ? hyper.beta_background : hyper.beta_foreground;
  }
};

/// Topic-word distributions held fixed during sampling; covers topics
/// [0, count). Stored word-major like CountTables::topic_word.
struct FrozenTopics {
  std::size_t count = 0;
  std::size_t vocab_size = 0;
  std::vector<double> by_word;  // V x count

  double phi(std::size_t k, std::size_t w) const { return by_word[w * count + k]; }
};

struct TopicModel {
  std::size_t num_background_topics = 0;
  std::size_t num_foreground_topics = 0;
  std::size_t vocab_size = 0;
  std::uint64_t vocab_hash = 0;
  std::vector<double> phi;  // T x V, row-major
  Hyperparameters hyper;

  std::size_t num_topics() const noexcept { return num_background_topics + num_foreground_topics; }
  TopicRange background_topics() const noexcept { return {0, num_background_topics}; }
  TopicRange all_topics() const noexcept { return {0, num_topics()}; }
  std::span<const double> row(std::size_t k) const { return {phi.data() + k * vocab_size, vocab_size}; }
  double at(std::size_t k, std::size_t w) const { return phi[k * vocab_size + w]; }
  /// Frozen view of the first `count` rows.
  FrozenTopics freeze(std::size_t count) const;
};

struct DocTopicEstimate {
  TopicRange topics;
  std::vector<double> theta;  // one entry per topic in `topics`
};

struct MapEstimates {
  TopicModel model;
  std::vector<DocTopicEstimate> theta;
};

/// Random initial assignments over `allowed` for the given documents.
CountTables initialize_tables(std::span<const std::vector<WordId>* const> docs, std::size_t vocab_size,
                              std::size_t num_background_topics, std::size_t num_foreground_topics,
                              TopicRange allowed, Rng& rng);
CountTables initialize_tables(std::span<const Document> docs, std::size_t vocab_size,
                              std::size_t num_background_topics, std::size_t num_foreground_topics,
                              TopicRange allowed, Rng& rng);

/// Rebuilds doc_topic, topic_word and topic_total from words and assignments.
CountTables recount(const CountTables& tables);
bool recount_matches(const CountTables& tables);

/// Normalized P(z = k) over `allowed` for the token at (doc, pos). The tables
/// must already exclude that token's own assignment. Frozen topics use their
/// fixed phi instead of the count ratio.
std::vector<double> conditional_distribution(const CountTables& tables, const Hyperparameters& hyper,
                                             std::size_t doc, std::size_t pos, TopicRange allowed,
                                             const FrozenTopics* frozen = nullptr);

/// One sequential scan over every token of `docs`.
void gibbs_sweep(CountTables& tables, const Hyperparameters& hyper, std::span<const std::size_t> docs,
                 TopicRange allowed, const FrozenTopics* frozen, Rng& rng);
/// Sweep over every document in the tables.
void gibbs_sweep(CountTables& tables, const Hyperparameters& hyper, TopicRange allowed,
                 const FrozenTopics* frozen, Rng& rng);

/// Smoothed point estimates from the current tables. Rows covered by `frozen`
/// are copied from it verbatim.
MapEstimates map_estimates(const CountTables& tables, const Hyperparameters& hyper,
                           const FrozenTopics* frozen = nullptr);

/// Smoothed theta of one document from its topic counts.
DocTopicEstimate smoothed_theta(std::span<const std::int32_t> counts, std::size_t length, TopicRange topics,
                                const Hyperparameters& hyper);

/// Estimates theta for one document with phi held fixed. The returned theta
/// is the smoothed estimate averaged over the second half of the sweeps.
DocTopicEstimate fold_in(const TopicModel& model, std::span<const WordId> tokens, TopicRange allowed,
                         std::size_t sweeps, Rng& rng);

// Text checkpoint; the format is described in README.md.
void save_checkpoint(std::ostream& out, const TopicModel& model);
TopicModel load_checkpoint(std::istream& in);

}  // namespace scss
