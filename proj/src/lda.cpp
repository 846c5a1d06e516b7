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

#include "scss/lda.hpp"

#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace scss {

Hyperparameters Hyperparameters::symmetric(std::size_t num_topics, double alpha, double beta_background,
                                           double beta_foreground) {
  Hyperparameters h;
  h.alpha.assign(num_topics, alpha);
  h.beta_background = beta_background;
  h.beta_foreground = beta_foreground;
  h.validate();
  return h;
}

void Hyperparameters::validate() const {
  for (double a : alpha) {
    if (!(a > 0.0)) throw Error("alpha entries must be strictly positive");
  }
  if (!(beta_background > 0.0) || !(beta_foreground > 0.0)) throw Error("beta must be strictly positive");
}

double Hyperparameters::alpha_sum(TopicRange range) const {
  double s = 0.0;
  for (std::size_t k = range.begin; k < range.end; ++k) s += alpha[k];
  return s;
}

FrozenTopics TopicModel::freeze(std::size_t count) const {
  if (count > num_topics()) throw Error("cannot freeze more topics than the model has");
  FrozenTopics f;
  f.count = count;
  f.vocab_size = vocab_size;
  f.by_word.resize(vocab_size * count);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t w = 0; w < vocab_size; ++w) f.by_word[w * count + k] = at(k, w);
  }
  return f;
}

namespace {

void check_range(TopicRange allowed, std::size_t num_topics) {
  if (allowed.empty()) throw Error("allowed topic range is empty");
  if (allowed.end > num_topics) throw Error("allowed topic range exceeds the number of topics");
}

// Unnormalized Gibbs weights for word w in document doc, written to out.
// Returns their sum.
double topic_weights(const CountTables& t, const Hyperparameters& hyper, std::size_t doc, WordId w,
                     TopicRange allowed, const FrozenTopics* frozen, double* out) {
  const std::size_t T = t.num_topics();
  const std::int32_t* nd = t.doc_topic.data() + doc * T;
  const std::int32_t* nw = t.topic_word.data() + static_cast<std::size_t>(w) * T;
  const std::size_t frozen_end = frozen ? std::min(frozen->count, allowed.end) : 0;
  const double vb_b = static_cast<double>(t.vocab_size) * hyper.beta_background;
  const double vb_f = static_cast<double>(t.vocab_size) * hyper.beta_foreground;
  double total = 0.0;
  std::size_t k = allowed.begin;
  for (; k < frozen_end; ++k) {
    const double p = (nd[k] + hyper.alpha[k]) * frozen->phi(k, w);
    out[k - allowed.begin] = p;
    total += p;
  }
  for (; k < allowed.end; ++k) {
    const bool bg = k < t.num_background_topics;
    const double beta = bg ? hyper.beta_background : hyper.beta_foreground;
    const double denom = t.topic_total[k] + (bg ? vb_b : vb_f);
    const double p = (nd[k] + hyper.alpha[k]) * (nw[k] + beta) / denom;
    out[k - allowed.begin] = p;
    total += p;
  }
  return total;
}

}  // namespace

CountTables initialize_tables(std::span<const std::vector<WordId>* const> docs, std::size_t vocab_size,
                              std::size_t num_background_topics, std::size_t num_foreground_topics,
                              TopicRange allowed, Rng& rng) {
  CountTables t;
  t.num_background_topics = num_background_topics;
  t.num_foreground_topics = num_foreground_topics;
  t.vocab_size = vocab_size;
  t.sampled_topics = allowed;
  const std::size_t T = t.num_topics();
  check_range(allowed, T);
  t.words.reserve(docs.size());
  t.assignments.reserve(docs.size());
  for (const auto* doc : docs) {
    t.words.push_back(*doc);
    auto& z = t.assignments.emplace_back(doc->size());
    for (auto& zk : z) zk = static_cast<TopicId>(allowed.begin + rng.index(allowed.size()));
    for (WordId w : *doc) {
      if (w >= vocab_size) throw Error("token id outside the vocabulary");
    }
  }
  return recount(t);
}

CountTables initialize_tables(std::span<const Document> docs, std::size_t vocab_size,
                              std::size_t num_background_topics, std::size_t num_foreground_topics,
                              TopicRange allowed, Rng& rng) {
  std::vector<const std::vector<WordId>*> ptrs;
  ptrs.reserve(docs.size());
  for (const auto& d : docs) ptrs.push_back(&d.tokens);
  return initialize_tables(ptrs, vocab_size, num_background_topics, num_foreground_topics, allowed, rng);
}

CountTables recount(const CountTables& tables) {
  CountTables t = tables;
  const std::size_t T = t.num_topics();
  t.doc_topic.assign(t.num_docs() * T, 0);
  t.topic_word.assign(t.vocab_size * T, 0);
  t.topic_total.assign(T, 0);
  for (std::size_t d = 0; d < t.num_docs(); ++d) {
    for (std::size_t j = 0; j < t.words[d].size(); ++j) {
      const std::size_t k = t.assignments[d][j];
      ++t.n_doc_topic(d, k);
      ++t.n_topic_word(k, t.words[d][j]);
      ++t.topic_total[k];
    }
  }
  return t;
}

bool recount_matches(const CountTables& tables) {
  const CountTables fresh = recount(tables);
  return fresh.doc_topic == tables.doc_topic && fresh.topic_word == tables.topic_word &&
         fresh.topic_total == tables.topic_total;
}

std::vector<double> conditional_distribution(const CountTables& tables, const Hyperparameters& hyper,
                                             std::size_t doc, std::size_t pos, TopicRange allowed,
                                             const FrozenTopics* frozen) {
  check_range(allowed, tables.num_topics());
  std::vector<double> p(allowed.size());
  const double total = topic_weights(tables, hyper, doc, tables.words.at(doc).at(pos), allowed, frozen, p.data());
  for (double& v : p) v /= total;
  return p;
}

void gibbs_sweep(CountTables& t, const Hyperparameters& hyper, std::span<const std::size_t> docs, TopicRange allowed,
                 const FrozenTopics* frozen, Rng& rng) {
  check_range(allowed, t.num_topics());
  const std::size_t T = t.num_topics();
  std::vector<double> weights(allowed.size());
  for (std::size_t d : docs) {
    const auto& words = t.words[d];
    auto& z = t.assignments[d];
    std::int32_t* nd = t.doc_topic.data() + d * T;
    for (std::size_t j = 0; j < words.size(); ++j) {
      const WordId w = words[j];
      std::int32_t* nw = t.topic_word.data() + static_cast<std::size_t>(w) * T;
      std::size_t k = z[j];
      --nd[k];
      --nw[k];
      --t.topic_total[k];
      const double total = topic_weights(t, hyper, d, w, allowed, frozen, weights.data());
      k = allowed.begin + rng.categorical(weights, total);
      z[j] = static_cast<TopicId>(k);
      ++nd[k];
      ++nw[k];
      ++t.topic_total[k];
    }
  }
}

void gibbs_sweep(CountTables& tables, const Hyperparameters& hyper, TopicRange allowed, const FrozenTopics* frozen,
                 Rng& rng) {
  std::vector<std::size_t> all(tables.num_docs());
  std::iota(all.begin(), all.end(), std::size_t{0});
  gibbs_sweep(tables, hyper, all, allowed, frozen, rng);
}

DocTopicEstimate smoothed_theta(std::span<const std::int32_t> counts, std::size_t length, TopicRange topics,
                                const Hyperparameters& hyper) {
  DocTopicEstimate est;
  est.topics = topics;
  est.theta.resize(topics.size());
  const double denom = static_cast<double>(length) + hyper.alpha_sum(topics);
  for (std::size_t k = topics.begin; k < topics.end; ++k) {
    est.theta[k - topics.begin] = (counts[k] + hyper.alpha[k]) / denom;
  }
  return est;
}

MapEstimates map_estimates(const CountTables& t, const Hyperparameters& hyper, const FrozenTopics* frozen) {
  MapEstimates out;
  auto& m = out.model;
  m.num_background_topics = t.num_background_topics;
  m.num_foreground_topics = t.num_foreground_topics;
  m.vocab_size = t.vocab_size;
  m.hyper = hyper;
  const std::size_t T = t.num_topics();
  const std::size_t V = t.vocab_size;
  m.phi.resize(T * V);
  const std::size_t frozen_count = frozen ? frozen->count : 0;
  for (std::size_t k = 0; k < T; ++k) {
    double* row = m.phi.data() + k * V;
    if (k < frozen_count) {
      for (std::size_t w = 0; w < V; ++w) row[w] = frozen->phi(k, w);
      continue;
    }
    const double beta = t.word_prior(k, hyper);
    const double denom = t.topic_total[k] + static_cast<double>(V) * beta;
    for (std::size_t w = 0; w < V; ++w) row[w] = (t.n_topic_word(k, w) + beta) / denom;
  }
  out.theta.reserve(t.num_docs());
  for (std::size_t d = 0; d < t.num_docs(); ++d) {
    out.theta.push_back(smoothed_theta({t.doc_topic.data() + d * T, T}, t.words[d].size(), t.sampled_topics, hyper));
  }
  return out;
}

DocTopicEstimate fold_in(const TopicModel& model, std::span<const WordId> tokens, TopicRange allowed,
                         std::size_t sweeps, Rng& rng) {
  check_range(allowed, model.num_topics());
  const std::size_t T = model.num_topics();
  std::vector<std::int32_t> counts(T, 0);
  std::vector<TopicId> z(tokens.size());
  for (auto& zk : z) {
    zk = static_cast<TopicId>(allowed.begin + rng.index(allowed.size()));
    ++counts[zk];
  }
  if (tokens.empty() || sweeps == 0 || allowed.size() == 1) {
    return smoothed_theta(counts, tokens.size(), allowed, model.hyper);
  }
  std::vector<double> weights(allowed.size());
  std::vector<double> mean(allowed.size(), 0.0);
  const std::size_t burn_in = sweeps / 2;
  std::size_t kept = 0;
  for (std::size_t s = 0; s < sweeps; ++s) {
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      --counts[z[j]];
      double total = 0.0;
      for (std::size_t k = allowed.begin; k < allowed.end; ++k) {
        const double p = (counts[k] + model.hyper.alpha[k]) * model.at(k, tokens[j]);
        weights[k - allowed.begin] = p;
        total += p;
      }
      const std::size_t k = allowed.begin + rng.categorical(weights, total);
      z[j] = static_cast<TopicId>(k);
      ++counts[k];
    }
    if (s >= burn_in) {
      const auto est = smoothed_theta(counts, tokens.size(), allowed, model.hyper);
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += est.theta[i];
      ++kept;
    }
  }
  for (double& v : mean) v /= static_cast<double>(kept);
  return {allowed, std::move(mean)};
}

void save_checkpoint(std::ostream& out, const TopicModel& m) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << "scss-topic-model 1\n";
  buf << "background_topics " << m.num_background_topics << '\n';
  buf << "foreground_topics " << m.num_foreground_topics << '\n';
  buf << "vocab_size " << m.vocab_size << '\n';
  buf << "vocab_hash " << std::hex << std::setw(16) << std::setfill('0') << m.vocab_hash << std::dec
      << std::setfill(' ') << '\n';
  buf << "beta_background " << m.hyper.beta_background << '\n';
  buf << "beta_foreground " << m.hyper.beta_foreground << '\n';
  buf << "alpha";
  for (double a : m.hyper.alpha) buf << ' ' << a;
  buf << "\nphi\n";
  for (std::size_t k = 0; k < m.num_topics(); ++k) {
    const auto row = m.row(k);
    for (std::size_t w = 0; w < row.size(); ++w) buf << (w ? " " : "") << row[w];
    buf << '\n';
  }
  out << buf.str();
}

TopicModel load_checkpoint(std::istream& in) {
  auto expect = [&in](const char* key) {
    std::string k;
    if (!(in >> k) || k != key) throw Error(std::string("checkpoint: expected '") + key + "'");
  };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "scss-topic-model" || version != 1) {
    throw Error("checkpoint: not an scss-topic-model v1 file");
  }
  TopicModel m;
  expect("background_topics");
  in >> m.num_background_topics;
  expect("foreground_topics");
  in >> m.num_foreground_topics;
  expect("vocab_size");
  in >> m.vocab_size;
  expect("vocab_hash");
  in >> std::hex >> m.vocab_hash >> std::dec;
  expect("beta_background");
  in >> m.hyper.beta_background;
  expect("beta_foreground");
  in >> m.hyper.beta_foreground;
  expect("alpha");
  m.hyper.alpha.resize(m.num_topics());
  for (double& a : m.hyper.alpha) in >> a;
  expect("phi");
  m.phi.resize(m.num_topics() * m.vocab_size);
  for (double& v : m.phi) in >> v;
  if (!in) throw Error("checkpoint: truncated or malformed");
  m.hyper.validate();
  return m;
}

}  // namespace scss
