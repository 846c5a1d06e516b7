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

#include "doctest.h"
#include "oracles.hpp"
#include "scss/semantic_scan.hpp"
#include "test_util.hpp"

using namespace scss;
using scss::testing::make_doc;

namespace {

Vocabulary vocabulary(std::size_t n) {
  Vocabulary v;
  for (std::size_t i = 0; i < n; ++i) v.add("w" + std::to_string(i));
  return v;
}

// Documents drawing uniformly from words [lo, hi).
std::vector<Document> uniform_docs(std::size_t count, std::size_t length, WordId lo, WordId hi, Rng& rng) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<WordId> t(length);
    for (auto& w : t) w = lo + static_cast<WordId>(rng.index(hi - lo));
    docs.push_back(make_doc(std::move(t)));
  }
  return docs;
}

ScanConfig quick(std::size_t tb, std::size_t tf) {
  auto c = ScanConfig::emerging(tb, tf);
  c.background_sweeps = 100;
  c.foreground_sweeps = 100;
  c.alpha = 0.1;
  c.seed = 4;
  return c;
}

}  // namespace

TEST_CASE("variant invariants") {
  CHECK_NOTHROW(ScanConfig::static_topics(3).validate());
  CHECK_NOTHROW(ScanConfig::dynamic(3).validate());
  CHECK_NOTHROW(ScanConfig::emerging(3, 2).validate());
  CHECK_THROWS_AS(ScanConfig::emerging(3, 0).validate(), Error);
  CHECK_THROWS_AS(ScanConfig::dynamic(0).validate(), Error);
  auto bad = ScanConfig::static_topics(2);
  bad.num_foreground_topics = 1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("one background topic is the smoothed word distribution") {
  Rng rng(1);
  const auto vocab = vocabulary(6);
  const auto docs = uniform_docs(40, 5, 0, 4, rng);
  auto config = quick(1, 1);
  config.beta_background = 0.3;
  const auto fit = fit_background(docs, vocab, config);
  std::vector<double> counts(6, 0.0);
  double n = 0.0;
  for (const auto& d : docs) {
    for (auto w : d.tokens) {
      counts[w] += 1;
      n += 1;
    }
  }
  for (std::size_t w = 0; w < 6; ++w) {
    CHECK(fit.model.at(0, w) == doctest::Approx((counts[w] + 0.3) / (n + 6 * 0.3)).epsilon(1e-12));
  }
  CHECK(fit.model.vocab_hash == vocab.hash());
}

TEST_CASE("two disjoint vocabularies separate into two topics") {
  Rng rng(2);
  const auto vocab = vocabulary(10);
  auto docs = uniform_docs(150, 10, 0, 5, rng);
  const auto more = uniform_docs(150, 10, 5, 10, rng);
  docs.insert(docs.end(), more.begin(), more.end());
  const auto fit = fit_background(docs, vocab, quick(2, 1));
  std::vector<std::vector<double>> truth(2, std::vector<double>(10, 0.0));
  for (int w = 0; w < 5; ++w) truth[0][w] = truth[1][w + 5] = 0.2;
  CHECK(oracle::greedy_matched_l1(truth, oracle::rows(fit.model, {0, 2})) <= 0.15);
}

TEST_CASE("background fit is deterministic") {
  Rng rng(3);
  const auto vocab = vocabulary(8);
  const auto docs = uniform_docs(50, 4, 0, 8, rng);
  const auto a = fit_background(docs, vocab, quick(3, 1));
  const auto b = fit_background(docs, vocab, quick(3, 1));
  CHECK(a.model.phi == b.model.phi);
  auto other = quick(3, 1);
  other.seed = 5;
  CHECK(fit_background(docs, vocab, other).model.phi != a.model.phi);
}

TEST_CASE("foreground fit") {
  Rng rng(4);
  const auto vocab = vocabulary(15);
  const auto bg_docs = uniform_docs(200, 6, 0, 10, rng);
  const auto background = fit_background(bg_docs, vocab, quick(2, 2)).model;

  SUBCASE("no foreground topics returns the input model") {
    auto config = ScanConfig::static_topics(2);
    config.foreground_sweeps = 20;
    const auto fit = fit_foreground(background, uniform_docs(20, 5, 0, 10, rng), config);
    CHECK(fit.model.phi == background.phi);
    CHECK(fit.model.num_topics() == 2);
  }
  SUBCASE("empty foreground leaves the prior mean") {
    const auto fit = fit_foreground(background, std::span<const Document>{}, quick(2, 2));
    for (std::size_t k = 2; k < 4; ++k) {
      for (std::size_t w = 0; w < 15; ++w) CHECK(fit.model.at(k, w) == doctest::Approx(1.0 / 15).epsilon(1e-15));
    }
  }
  SUBCASE("background rows are untouched") {
    auto fg = uniform_docs(50, 5, 0, 15, rng);
    const auto fit = fit_foreground(background, fg, quick(2, 2));
    for (std::size_t k = 0; k < 2; ++k) {
      for (std::size_t w = 0; w < 15; ++w) CHECK(fit.model.at(k, w) == background.at(k, w));
    }
    CHECK(recount_matches(fit.tables));
  }
  SUBCASE("a planted novel-word topic is learned") {
    auto fg = uniform_docs(150, 6, 0, 10, rng);
    const auto novel = uniform_docs(60, 6, 10, 15, rng);
    fg.insert(fg.end(), novel.begin(), novel.end());
    const auto fit = fit_foreground(background, fg, quick(2, 2));
    double best = 0.0;
    for (std::size_t k = 2; k < 4; ++k) {
      double mass = 0.0;
      for (std::size_t w = 10; w < 15; ++w) mass += fit.model.at(k, w);
      best = std::max(best, mass);
    }
    CHECK(best >= 0.5);
  }
  SUBCASE("mismatched topic counts are rejected") {
    CHECK_THROWS_AS(fit_foreground(background, bg_docs, quick(3, 2)), Error);
  }
}
