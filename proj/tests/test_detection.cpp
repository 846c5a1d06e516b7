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
#include <limits>
#include <set>
#include <sstream>

#include "doctest.h"
#include "scss/detection.hpp"
#include "test_util.hpp"

using namespace scss;

TEST_CASE("metric rows") {
  const auto exact = make_metric_row(3, 0, 0);
  CHECK(exact.precision == 1.0);
  CHECK(exact.recall == 1.0);
  CHECK(exact.overlap == 1.0);
  const auto disjoint = make_metric_row(0, 2, 3);
  CHECK(disjoint.precision == 0.0);
  CHECK(disjoint.recall == 0.0);
  CHECK(disjoint.overlap == 0.0);
  const auto mixed = make_metric_row(2, 1, 1);
  CHECK(mixed.precision == doctest::Approx(2.0 / 3));
  CHECK(mixed.recall == doctest::Approx(2.0 / 3));
  CHECK(mixed.overlap == doctest::Approx(0.5));
  const auto empty = make_metric_row(0, 0, 0);
  CHECK(empty.precision == 1.0);
  CHECK(empty.overlap == 1.0);
  // Nothing detected, something missed.
  const auto missed = make_metric_row(0, 0, 4);
  CHECK(missed.precision == 0.0);
  CHECK(missed.recall == 0.0);
}

TEST_CASE("set metrics count distinct members") {
  const std::vector<LocationId> detected{3, 1, 1, 7};
  const std::vector<LocationId> truth{1, 2, 3};
  const auto row = spatial_metrics(detected, truth);
  CHECK(row.tp == 2);
  CHECK(row.fp == 1);
  CHECK(row.fn == 1);
  const std::vector<std::string> docs{"a", "b"};
  CHECK(document_metrics(docs, docs).overlap == 1.0);
}

TEST_CASE("injected documents in a trailing window") {
  OutbreakGroundTruth t;
  t.duration = 4;
  t.injected = {{"a"}, {"b", "c"}, {"d"}, {"e"}};
  CHECK(injected_in_window(t, 1, 3) == std::vector<std::string>{"a"});
  CHECK(injected_in_window(t, 3, 3) == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(injected_in_window(t, 4, 3) == std::vector<std::string>{"b", "c", "d", "e"});
  CHECK(injected_in_window(t, 4, 1) == std::vector<std::string>{"e"});
}

TEST_CASE("threshold calibration") {
  std::vector<double> null(730);
  for (std::size_t i = 0; i < null.size(); ++i) null[i] = static_cast<double>(i);
  // Two years of data and one alarm per year: two null days exceed.
  const double tau = calibrated_threshold(null, 1.0);
  CHECK(std::count_if(null.begin(), null.end(), [&](double s) { return s > tau; }) == 2);
  CHECK(std::count_if(null.begin(), null.end(), [&](double s) { return s > calibrated_threshold(null, 52); }) ==
        104);
  CHECK(calibrated_threshold(null, 365.0) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(calibrated_threshold({}, 1.0), Error);
}

TEST_CASE("power curves") {
  std::vector<double> null(365);
  for (std::size_t i = 0; i < null.size(); ++i) null[i] = static_cast<double>(i) / 365.0;  // all below 1
  SUBCASE("every outbreak above every threshold") {
    const std::vector<std::vector<double>> outbreaks{{5, 6, 7}, {2, 2, 2}};
    const auto curve = power_curve(null, outbreaks);
    REQUIRE(curve.size() == kDefaultFpGrid.size());
    for (const auto& p : curve) {
      CHECK(p.fraction_detected == 1.0);
      CHECK(p.days_to_detect == 1.0);
      CHECK(p.undetected == 0);
    }
  }
  SUBCASE("every outbreak below every threshold") {
    const std::vector<std::vector<double>> outbreaks{{-1, -1, -1}};
    for (const auto& p : power_curve(null, outbreaks)) {
      CHECK(p.fraction_detected == 0.0);
      CHECK(p.days_to_detect == 3.0);
      CHECK(p.undetected == 1);
    }
  }
  SUBCASE("monotone in the alarm budget") {
    Rng rng(3);
    for (auto& v : null) v = rng.uniform();
    std::vector<std::vector<double>> outbreaks(30, std::vector<double>(30));
    for (auto& o : outbreaks) {
      for (std::size_t d = 0; d < o.size(); ++d) o[d] = rng.uniform() * (1.0 + 0.01 * static_cast<double>(d));
    }
    const auto curve = power_curve(null, outbreaks);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      CHECK(curve[i].fraction_detected >= curve[i - 1].fraction_detected);
      CHECK(curve[i].days_to_detect <= curve[i - 1].days_to_detect);
    }
  }
  SUBCASE("less than a year of null data") {
    const std::vector<double> short_null(364, 0.0);
    const std::vector<std::vector<double>> outbreaks{{1.0}};
    CHECK_THROWS_AS(power_curve(short_null, outbreaks), Error);
  }
}

TEST_CASE("maximum-likelihood topic assignment") {
  TopicModel m;
  m.num_background_topics = 3;
  m.vocab_size = 2;
  m.phi = {0.5, 0.5, 0.9, 0.1, 0.5, 0.5};
  CHECK(max_likelihood_topic(m, std::vector<WordId>{0, 0}, {0, 3}) == 1);
  CHECK(max_likelihood_topic(m, std::vector<WordId>{1}, {0, 3}) == 0);  // tie between 0 and 2
  CHECK(max_likelihood_topic(m, std::vector<WordId>{1}, {1, 3}) == 2);
  CHECK(max_likelihood_topic(m, std::vector<WordId>{}, {0, 3}) == 0);
}

TEST_CASE("method names") {
  for (Method m : all_methods()) CHECK(parse_method(to_string(m)) == m);
  CHECK(!parse_method("scan"));
  CHECK(method_names() == "scss, ss-emerging, ss-dynamic, ss-static, naive-bayes");
}

namespace {

struct World {
  LocationRegistry registry = synthetic_registry(16, 2);
  std::vector<Scenario> scenarios;
  DetectionConfig config;
};

World make_world(std::size_t count = 1) {
  World w;
  GeneratorConfig g;
  g.num_topics = 5;
  g.vocab_size = 150;
  g.docs_per_day = 25;
  g.background_end = 40;
  g.foreground_begin = 40;
  g.foreground_end = 60;
  g.seed = 21;
  const auto gen = generate_background(g, w.registry);
  OutbreakParams p;
  p.duration = 12;
  p.min_size = 2;
  p.max_size = 4;
  w.scenarios = make_benchmark(gen.corpus, w.registry, top_labels(gen.corpus, 1), count, p, 3);
  w.config.scan = ScanConfig::emerging(5, 2);
  w.config.scan.background_sweeps = 60;
  w.config.scan.foreground_sweeps = 30;
  w.config.scan.fold_in_sweeps = 10;
  w.config.scan.seed = 1;
  return w;
}

}  // namespace

TEST_CASE("detector windows and outputs") {
  const auto w = make_world();
  const auto& s = w.scenarios[0];
  const Detector det(s.corpus, w.registry, w.config);
  CHECK(det.first_detectable_day() == 42);
  for (const auto* d : det.window(45)) {
    CHECK(d->day >= 43);
    CHECK(d->day <= 45);
  }

  std::vector<Day> skipped;
  const auto out = det.run_windows(Method::kNaiveBayes, 40, 42, &skipped);
  CHECK(out.size() == 1);
  CHECK(skipped == std::vector<Day>{40, 41});

  std::set<std::string> ids;
  for (const auto& d : s.corpus.foreground) ids.insert(d.id);
  const Day day = s.truth.start_day + 8;
  for (Method m : all_methods()) {
    CAPTURE(to_string(m));
    const auto a = det.detect(m, day);
    CHECK(a.day == day);
    CHECK(std::isfinite(a.score));
    CHECK(a.score >= 0.0);
    for (auto j : a.locations) CHECK(j < w.registry.size());
    CHECK(std::is_sorted(a.locations.begin(), a.locations.end()));
    for (const auto& id : a.documents) CHECK(ids.count(id) == 1);
    // Same (method, seed, day): same output.
    const auto b = det.detect(m, day);
    CHECK(a.score == b.score);
    CHECK(a.locations == b.locations);
    CHECK(a.documents == b.documents);
    CHECK(det.run_windows(m, day, day).size() == 1);
  }
  // A strong planted event shows up in the SCSS footprint.
  const auto scss = det.detect(Method::kScss, day);
  CHECK(spatial_metrics(scss.locations, s.truth.affected).recall > 0.0);
}

TEST_CASE("remove_injected restores the null corpus") {
  const auto w = make_world();
  const auto& s = w.scenarios[0];
  const auto null = remove_injected(s.corpus, s.truth);
  CHECK(null.foreground.size() + s.truth.total_injected() == s.corpus.foreground.size());
  CHECK(null.background.size() == s.corpus.background.size());
}

TEST_CASE("benchmark evaluation shape and CSV output") {
  auto w = make_world(2);
  w.config.threads = 2;
  const std::vector<Method> methods{Method::kNaiveBayes, Method::kSsStatic};
  const auto evals = evaluate_benchmark(w.scenarios, w.registry, methods, w.config);
  REQUIRE(evals.size() == 2);
  for (const auto& e : evals) {
    CHECK(e.scenarios.size() == 2);
    for (const auto& rows : e.scenarios) CHECK(rows.size() == 12);
    CHECK(e.outbreak_scores.size() == 2);
    // Two short null streams cannot calibrate a year of alarms.
    CHECK(!e.curve_error.empty());
    CHECK(e.null_scores.size() == 2 * 18);
  }
  // Threaded and serial runs agree.
  w.config.threads = 1;
  const auto serial = evaluate_benchmark(w.scenarios, w.registry, methods, w.config);
  CHECK(serial[1].null_scores == evals[1].null_scores);

  std::ostringstream csv;
  write_metrics_header(csv);
  write_metrics_rows(csv, evals[0].method, evals[0].scenarios[0]);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "day,method,sp_prec,sp_rec,sp_ovl,doc_prec,doc_rec,doc_ovl");
  std::getline(in, line);
  CHECK(line.rfind("1,naive-bayes,", 0) == 0);

  const auto mean = mean_by_day(evals[0].scenarios);
  REQUIRE(mean.size() == 12);
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const auto& a = evals[0].scenarios[0][i];
    const auto& b = evals[0].scenarios[1][i];
    CHECK(mean[i].outbreak_day == i + 1);
    CHECK(mean[i].spatial.overlap == doctest::Approx((a.spatial.overlap + b.spatial.overlap) / 2).epsilon(1e-15));
    CHECK(mean[i].document.precision ==
          doctest::Approx((a.document.precision + b.document.precision) / 2).epsilon(1e-15));
    CHECK(mean[i].document.tp == a.document.tp + b.document.tp);
  }
  std::vector<std::vector<OutbreakDayResult>> ragged{evals[0].scenarios[0], {}};
  CHECK_THROWS_AS(mean_by_day(ragged), Error);

  std::ostringstream power;
  write_power_header(power);
  CHECK(power.str() == "fp_per_year,method,frac_detected,days_to_detect\n");
}
