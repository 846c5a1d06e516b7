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
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "scss/corpus.hpp"
#include "test_util.hpp"

using namespace scss;
using scss::testing::line_registry;

namespace {

LocationRegistry grid_registry() {
  std::vector<Location> locs;
  for (int i = 0; i < 8; ++i) locs.push_back({std::to_string(15000 + i), 40.0 + 0.01 * i, -80.0});
  return LocationRegistry(locs);
}

}  // namespace

TEST_CASE("dates round-trip through the day index") {
  CHECK(parse_date("1970-01-01") == 0);
  CHECK(parse_date("1970-01-02") == 1);
  CHECK(format_date(parse_date("2012-02-29")) == "2012-02-29");
  CHECK_THROWS_AS(parse_date("2013-02-29"), Error);
  CHECK_THROWS_AS(parse_date("yesterday"), Error);
}

TEST_CASE("tokenizer lowercases and drops punctuation") {
  CHECK(tokenize("FEVER, cough") == std::vector<std::string>{"fever", "cough"});
  CHECK(tokenize("  n/v  x3 days ") == std::vector<std::string>{"nv", "x3", "days"});
  CHECK(tokenize("").empty());
}

TEST_CASE("ingest splits on the split day and keeps empty documents") {
  const auto reg = grid_registry();
  const std::vector<RawRecord> records{
      {"a", "FEVER, cough", 3, "15007", ""},
      {"b", "", 4, "15001", ""},
  };
  SUBCASE("record before the split is background") {
    const auto r = ingest(records, reg, 10);
    REQUIRE(r.corpus.background.size() == 2);
    const auto& d = r.corpus.background[0];
    CHECK(d.location == 7);
    REQUIRE(d.tokens.size() == 2);
    CHECK(r.corpus.vocabulary.word(d.tokens[0]) == "fever");
    CHECK(r.corpus.vocabulary.word(d.tokens[1]) == "cough");
    CHECK(r.corpus.background[1].tokens.empty());
  }
  SUBCASE("record on or after the split is foreground") {
    const auto r = ingest(records, reg, 2);
    CHECK(r.corpus.background.empty());
    CHECK(r.corpus.foreground.size() == 2);
  }
}

TEST_CASE("ingest rejects unknown locations and empty corpora") {
  const auto reg = grid_registry();
  const std::vector<RawRecord> records{{"a", "rash", 0, "99999", ""}, {"b", "rash", 0, "15000", ""}};
  const auto r = ingest(records, reg, 1);
  CHECK(r.rejected.size() == 1);
  CHECK(r.corpus.size() == 1);
  const std::vector<RawRecord> bad{{"a", "rash", 0, "99999", ""}};
  CHECK_THROWS_AS(ingest(bad, reg, 1), Error);
}

TEST_CASE("JSONL records round-trip") {
  const std::vector<RawRecord> records{{"x1", "sore throat", parse_date("2020-01-05"), "15003", "j02"},
                                       {"x2", "", parse_date("2020-01-06"), "15004", ""}};
  std::stringstream ss;
  write_records_jsonl(ss, records);
  const auto back = read_records_jsonl(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "x1");
  CHECK(back[0].text == "sore throat");
  CHECK(back[0].day == records[0].day);
  CHECK(back[0].label == "j02");
  CHECK(back[1].label.empty());

  std::istringstream broken("{\"text\": \"a\", \"zipcode\": \"1\"}\n");
  CHECK_THROWS_AS(read_records_jsonl(broken), Error);
}

TEST_CASE("registry validation and CSV round-trip") {
  CHECK_THROWS_AS(LocationRegistry({{"a", 95.0, 0.0}}), Error);
  CHECK_THROWS_AS(LocationRegistry({{"a", 0.0, 0.0}, {"a", 1.0, 1.0}}), Error);
  const auto reg = grid_registry();
  std::stringstream ss;
  write_registry_csv(ss, reg);
  const auto back = read_registry_csv(ss);
  REQUIRE(back.size() == reg.size());
  for (LocationId i = 0; i < reg.size(); ++i) {
    CHECK(back.at(i).zipcode == reg.at(i).zipcode);
    CHECK(back.at(i).latitude == reg.at(i).latitude);
  }
  std::istringstream bad_header("zip,lat,lon\n1,2,3\n");
  CHECK_THROWS_AS(read_registry_csv(bad_header), Error);
}

TEST_CASE("haversine distance") {
  CHECK(haversine_km(40.0, -80.0, 40.0, -80.0) == 0.0);
  // One degree of latitude on the mean-radius sphere.
  CHECK(haversine_km(0.0, 0.0, 1.0, 0.0) == doctest::Approx(scss::testing::kKmPerDegree).epsilon(1e-9));
}

TEST_CASE("neighborhood edge sizes") {
  const auto reg = grid_registry();
  for (LocationId c = 0; c < reg.size(); ++c) {
    CHECK(reg.neighborhood(c, 1) == std::vector<LocationId>{c});
    auto all = reg.neighborhood(c, reg.size());
    std::sort(all.begin(), all.end());
    std::vector<LocationId> expect(reg.size());
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(all == expect);
  }
  CHECK_THROWS_AS(reg.neighborhood(0, 0), Error);
  CHECK_THROWS_AS(reg.neighborhood(0, reg.size() + 1), Error);
}

TEST_CASE("collinear points: nearest three") {
  // Ids deliberately out of distance order: id 0 is 3 km out, id 3 is the center.
  const auto reg = line_registry({3.0, 1.0, 2.0, 0.0});
  CHECK(reg.neighborhood(3, 3) == std::vector<LocationId>{3, 1, 2});
}

TEST_CASE("neighbor order matches a brute-force distance sort") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> coord(0.0, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Location> locs;
    const int n = 2 + trial % 9;
    for (int i = 0; i < n; ++i) locs.push_back({std::to_string(i), 40.0 + coord(gen), -80.0 + coord(gen)});
    // Force one exact tie.
    locs.back().latitude = locs.front().latitude;
    locs.back().longitude = locs.front().longitude + 0.05;
    const LocationRegistry reg(locs);
    for (LocationId c = 0; c < reg.size(); ++c) {
      std::vector<LocationId> ids(reg.size());
      std::iota(ids.begin(), ids.end(), 0);
      std::stable_sort(ids.begin(), ids.end(), [&](LocationId a, LocationId b) {
        const bool ca = a == c;
        const bool cb = b == c;
        if (ca != cb) return ca;
        const double da = haversine_km(locs[c].latitude, locs[c].longitude, locs[a].latitude, locs[a].longitude);
        const double db = haversine_km(locs[c].latitude, locs[c].longitude, locs[b].latitude, locs[b].longitude);
        if (da != db) return da < db;
        return a < b;
      });
      const auto got = reg.neighbors(c);
      CHECK(std::vector<LocationId>(got.begin(), got.end()) == ids);
    }
  }
}

TEST_CASE("vocabulary hash depends on word order") {
  Vocabulary a;
  a.add("x");
  a.add("y");
  Vocabulary b;
  b.add("y");
  b.add("x");
  Vocabulary c;
  c.add("x");
  c.add("y");
  CHECK(a.hash() == c.hash());
  CHECK(a.hash() != b.hash());
  CHECK(a.add("x") == 0);
  CHECK(a.size() == 2);
}
