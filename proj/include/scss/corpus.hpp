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

// Corpus representation: tokenization, vocabulary, the background/foreground
// split and the location registry with nearest-neighbor neighborhoods.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scss {

using WordId = std::uint32_t;
using LocationId = std::uint32_t;
/// Day index counted from 1970-01-01.
using Day = std::int32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Day parse_date(std::string_view iso);
std::string format_date(Day day);

/// Lowercases, drops every character that is neither alphanumeric nor
/// whitespace, and splits on whitespace.
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  WordId add(std::string_view word);
  std::optional<WordId> find(std::string_view word) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  /// FNV-1a over the id-ordered word list; identifies the id assignment.
  std::uint64_t hash() const noexcept;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
};

struct Document {
  std::string id;
  std::vector<WordId> tokens;
  Day day = 0;
  LocationId location = 0;
  /// Held-out class used only by the outbreak simulator.
  std::string label;
};

struct Corpus {
  std::vector<Document> background;
  std::vector<Document> foreground;
  Vocabulary vocabulary;

  std::size_t size() const noexcept { return background.size() + foreground.size(); }
  std::string text_of(const Document& doc) const;
};

struct Location {
  std::string zipcode;
  double latitude = 0.0;
  double longitude = 0.0;
};

/// Great-circle distance in kilometres.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

class LocationRegistry {
 public:
  LocationRegistry() = default;
  explicit LocationRegistry(std::vector<Location> locations);

  std::size_t size() const noexcept { return locations_.size(); }
  const Location& at(LocationId id) const { return locations_.at(id); }
  const std::vector<Location>& locations() const noexcept { return locations_; }
  std::optional<LocationId> find(std::string_view zipcode) const;
  double distance_km(LocationId a, LocationId b) const;

  /// Every location ordered by distance from `center`, ties by id.
  std::span<const LocationId> neighbors(LocationId center) const;
  /// The `size` nearest locations to `center`, center first.
  std::vector<LocationId> neighborhood(LocationId center, std::size_t size) const;

 private:
  std::vector<Location> locations_;
  std::unordered_map<std::string, LocationId> ids_;
  std::vector<LocationId> order_;  // size() rows of size() entries
};

struct RawRecord {
  std::string id;
  std::string text;
  Day day = 0;
  std::string zipcode;
  std::string label;
};

struct IngestResult {
  Corpus corpus;
  /// One diagnostic per rejected record.
  std::vector<std::string> rejected;
};

/// Builds a corpus; records dated before `split_day` form the background.
IngestResult ingest(std::span<const RawRecord> records, const LocationRegistry& registry, Day split_day);

// Line-delimited JSON records: text, date, zipcode, optional id and label.
std::vector<RawRecord> read_records_jsonl(std::istream& in);
std::vector<RawRecord> read_records_jsonl_file(const std::string& path);
void write_records_jsonl(std::ostream& out, std::span<const RawRecord> records);
/// Flattens a corpus back to records (background first).
std::vector<RawRecord> to_records(const Corpus& corpus, const LocationRegistry& registry);

// CSV with header zipcode,latitude,longitude.
LocationRegistry read_registry_csv(std::istream& in);
LocationRegistry read_registry_csv_file(const std::string& path);
void write_registry_csv(std::ostream& out, const LocationRegistry& registry);

}  // namespace scss
