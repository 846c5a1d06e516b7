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
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "scss/baselines.hpp"
#include "scss/rng.hpp"
#include "test_util.hpp"

using namespace scss;
using scss::testing::line_registry;
using scss::testing::make_doc;
using scss::testing::pointers;

TEST_CASE("naive Bayes: two-word hand example") {
  const std::vector<Document> bg{make_doc({0, 0, 0, 1})};
  const std::vector<Document> fg{make_doc({0, 1, 1, 1})};
  const auto model = nb_fit(pointers(bg), pointers(fg), 2);
  const std::vector<WordId> doc{0, 0};
  CHECK(nb_log_joint(model, doc, 0) == doctest::Approx(std::log(0.5) + 2 * std::log(4.0 / 6)).epsilon(1e-14));
  CHECK(nb_log_joint(model, doc, 1) == doctest::Approx(std::log(0.5) + 2 * std::log(2.0 / 6)).epsilon(1e-14));
  CHECK(nb_predict(model, doc) == 0);
  for (int c = 0; c < 2; ++c) {
    double sum = 0.0;
    for (double lp : model.log_word_prob[c]) sum += std::exp(lp);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("naive Bayes: foreground-only words and ties") {
  const std::vector<Document> bg{make_doc({0, 1}), make_doc({1, 0})};
  const std::vector<Document> fg{make_doc({2, 2}), make_doc({0, 1})};
  const auto model = nb_fit(pointers(bg), pointers(fg), 3);
  CHECK(nb_predict(model, std::vector<WordId>{2}) == 1);
  CHECK(nb_predict(model, std::vector<WordId>{2, 2, 2}) == 1);

  // Symmetric training data: every document ties.
  const std::vector<Document> a{make_doc({0, 1})};
  const std::vector<Document> b{make_doc({1, 0})};
  const auto tie = nb_fit(pointers(a), pointers(b), 2);
  CHECK(nb_predict(tie, std::vector<WordId>{0}) == 0);
  CHECK(nb_predict(tie, std::vector<WordId>{}) == 0);
  CHECK_THROWS_AS(nb_fit({}, pointers(b), 2), Error);
}

TEST_CASE("Poisson scan statistic") {
  CHECK(poisson_score(10, 5) == doctest::Approx(10 * std::log(2.0) - 5).epsilon(1e-15));
  CHECK(poisson_score(10, 5) == doctest::Approx(1.9315).epsilon(1e-4));
  CHECK(poisson_score(3, 3) == 0.0);
  CHECK(poisson_score(2, 3) == 0.0);
  CHECK(poisson_score(0, 0) == 0.0);
}

TEST_CASE("circular scan edge cases") {
  const auto reg = line_registry({0, 1, 2, 3});
  const std::vector<double> same{2, 3, 1, 4};
  const auto flat = circular_scan(same, same, reg);
  CHECK(flat.statistic == 0.0);
  CHECK(flat.cluster.empty());

  const auto one = circular_scan(std::vector<double>{10, 0, 0, 0}, std::vector<double>{5, 1, 1, 1}, reg);
  CHECK(one.statistic == doctest::Approx(10 * std::log(2.0) - 5));
  CHECK(one.cluster == std::vector<LocationId>{0});

  CHECK_THROWS_AS(circular_scan(std::vector<double>{1, 0, 0, 0}, std::vector<double>{0, 1, 1, 1}, reg), Error);
  CHECK_THROWS_AS(circular_scan(std::vector<double>{1, 0}, std::vector<double>{1, 1}, reg), Error);
}

TEST_CASE("circular scan matches exhaustive search") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(10);
    std::vector<Location> locs;
    for (std::size_t i = 0; i < n; ++i) {
      locs.push_back({std::to_string(i), 40.0 + 0.3 * rng.uniform(), -80.0 + 0.3 * rng.uniform()});
    }
    const LocationRegistry reg(locs);
    std::vector<double> cases(n), baseline(n);
    for (std::size_t j = 0; j < n; ++j) {
      baseline[j] = 0.5 + 5.0 * rng.uniform();
      cases[j] = static_cast<double>(rng.poisson(baseline[j] * (rng.bernoulli(0.3) ? 3.0 : 1.0)));
    }
    const std::size_t max_size = 1 + rng.index(n);
    const auto got = circular_scan(cases, baseline, reg, max_size);
    const auto want = oracle::circular_scan(locs, cases, baseline, max_size);
    CHECK(got.statistic == doctest::Approx(want.statistic).epsilon(1e-12));
    auto cluster = got.cluster;
    std::sort(cluster.begin(), cluster.end());
    if (want.statistic > 0.0) {
      CHECK(std::find(want.argmax.begin(), want.argmax.end(), cluster) != want.argmax.end());
      CHECK(cluster.size() <= max_size);
    } else {
      CHECK(cluster.empty());
    }
  }
}
