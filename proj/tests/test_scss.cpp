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

#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "scss/detection.hpp"
#include "scss/outbreak.hpp"
#include "scss/scss.hpp"
#include "test_util.hpp"

using namespace scss;
using scss::testing::make_doc;
using scss::testing::pointers;

TEST_CASE("delta sampling") {
  std::vector<Document> docs;
  for (int i = 0; i < 10000; ++i) docs.push_back(make_doc({}, static_cast<LocationId>(i % 3)));
  const auto ptrs = pointers(docs);
  Rng rng(5);
  const auto ones = sample_delta(std::vector<double>{1.0, 1.0, 1.0}, ptrs, rng);
  CHECK(ones.count() == docs.size());
  const auto zeros = sample_delta(std::vector<double>{0.0, 0.0, 0.0}, ptrs, rng);
  CHECK(zeros.count() == 0);
  const auto some = sample_delta(std::vector<double>{0.3, 0.3, 0.3}, ptrs, rng);
  const double mean = static_cast<double>(some.count()) / static_cast<double>(docs.size());
  CHECK(mean >= 0.28);
  CHECK(mean <= 0.32);
  CHECK(ones.symmetric_difference(zeros) == docs.size());
  CHECK(some.symmetric_difference(some) == 0);
}

namespace {

// A desk-sized world with one planted novel-word event in 3-day window.
struct World {
  LocationRegistry registry = synthetic_registry(20, 3);
  Corpus corpus;
  OutbreakGroundTruth truth;
  TopicModel background;
  ScanConfig scan;
};

World make_world() {
  World w;
  GeneratorConfig g;
  g.num_topics = 6;
  g.vocab_size = 200;
  g.docs_per_day = 40;
  g.background_end = 60;
  g.foreground_begin = 60;
  g.foreground_end = 80;
  g.seed = 12;
  auto gen = generate_background(g, w.registry);
  const auto label = top_labels(gen.corpus, 1).front();
  auto pool = strip_label(gen.corpus, label);
  OutbreakParams params;
  params.duration = 15;
  params.start_day = 62;
  params.min_size = 3;
  params.max_size = 4;
  Rng rng(7);
  auto injected = inject_outbreak(std::move(gen.corpus), pool, w.registry, params, rng);
  w.corpus = std::move(injected.corpus);
  w.truth = std::move(injected.truth);
  w.scan = ScanConfig::emerging(6, 3);
  w.scan.background_sweeps = 150;
  w.scan.foreground_sweeps = 60;
  w.scan.seed = 9;
  w.background = fit_background(w.corpus, w.scan).model;
  return w;
}

std::vector<const Document*> window(const Corpus& c, Day last) {
  std::vector<const Document*> out;
  for (const auto& d : c.foreground) {
    if (d.day >= last - 2 && d.day <= last) out.push_back(&d);
  }
  return out;
}

}  // namespace

TEST_CASE("alternating inference on a planted event") {
  const auto w = make_world();
  const Day day15 = w.truth.start_day + 14;
  const auto docs = window(w.corpus, day15);
  ScssConfig config;
  config.scan = w.scan;
  const auto state = run(docs, w.background, w.registry, config);

  SUBCASE("delta set overlaps the planted documents") {
    std::vector<std::string> chosen;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (state.delta.delta[i]) chosen.push_back(docs[i]->id);
    }
    const auto planted = injected_in_window(w.truth, 15, 3);
    CHECK(document_metrics(chosen, planted).overlap >= 0.5);
  }
  SUBCASE("loop bookkeeping") {
    CHECK(state.iteration >= 1);
    CHECK(state.iteration <= config.max_iterations);
    CHECK(state.diagnostics.size() == state.iteration);
    CHECK(state.diagnostics.front().active_documents == docs.size());
    CHECK(state.lrs.log_lr.size() == docs.size());
    for (std::size_t k = 0; k < w.background.num_topics(); ++k) {
      const auto a = state.model.row(k);
      const auto b = w.background.row(k);
      CHECK(std::equal(a.begin(), a.end(), b.begin()));
    }
    std::ostringstream csv;
    write_diagnostics_csv(csv, state, w.registry);
    CHECK(csv.str().rfind("iteration,active_documents,top_center,top_size,top_posterior,refit_skipped,", 0) == 0);
  }
  SUBCASE("deterministic under a fixed seed") {
    const auto again = run(docs, w.background, w.registry, config);
    CHECK(again.delta.delta == state.delta.delta);
    CHECK(again.lrs.log_lr == state.lrs.log_lr);
  }
}

TEST_CASE("one iteration is a semantic scan followed by one spatial pass") {
  const auto w = make_world();
  const auto docs = window(w.corpus, w.truth.start_day + 5);
  ScssConfig config;
  config.scan = w.scan;
  config.max_iterations = 1;
  const auto state = run(docs, w.background, w.registry, config);
  CHECK(state.iteration == 1);
  CHECK(state.refit_delta.count() == docs.size());
  // The refit used every document, exactly as a plain foreground fit would.
  const auto plain = fit_foreground(w.background, docs, w.scan, 1);
  CHECK(plain.model.phi == state.model.phi);
  // The posterior is the spatial pass over this iteration's ratios.
  std::vector<LocationId> where;
  for (const auto* d : docs) where.push_back(d->location);
  const auto again = posterior(state.lrs, GfssPrior::defaults(w.registry), w.registry, where);
  CHECK(again.location_scores == state.posterior.location_scores);
}

TEST_CASE("inputs are validated") {
  const auto reg = synthetic_registry(4, 1);
  TopicModel bg;
  bg.num_background_topics = 2;
  bg.vocab_size = 3;
  bg.phi.assign(6, 1.0 / 3);
  bg.hyper = Hyperparameters::symmetric(2, 0.5, 0.01, 0.01);
  ScssConfig config;
  config.scan = ScanConfig::emerging(2, 1);
  CHECK_THROWS_AS(run(std::span<const Document>{}, bg, reg, config), Error);
  const std::vector<Document> docs{make_doc({0, 1})};
  config.scan.num_background_topics = 3;
  CHECK_THROWS_AS(run(docs, bg, reg, config), Error);
}
