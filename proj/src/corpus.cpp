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

#include "scss/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace scss {

Day parse_date(std::string_view iso) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  char dash1 = 0;
  char dash2 = 0;
  std::istringstream in{std::string(iso)};
  in >> y >> dash1 >> m >> dash2 >> d;
  if (!in || dash1 != '-' || dash2 != '-') throw Error("invalid ISO-8601 date: '" + std::string(iso) + "'");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw Error("invalid calendar date: '" + std::string(iso) + "'");
  return static_cast<Day>(std::chrono::sys_days{ymd}.time_since_epoch().count());
}

std::string format_date(Day day) {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day}}};
  std::ostringstream out;
  out << std::setfill('0') << std::setw(4) << static_cast<int>(ymd.year()) << '-' << std::setw(2)
      << static_cast<unsigned>(ymd.month()) << '-' << std::setw(2) << static_cast<unsigned>(ymd.day());
  return out.str();
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

WordId Vocabulary::add(std::string_view word) {
  const std::string key(word);
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  const auto id = static_cast<WordId>(words_.size());
  words_.push_back(key);
  ids_.emplace(key, id);
  return id;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  if (auto it = ids_.find(std::string(word)); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::uint64_t Vocabulary::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& w : words_) {
    for (char c : w) eat(static_cast<unsigned char>(c));
    eat('\n');
  }
  return h;
}

std::string Corpus::text_of(const Document& doc) const {
  std::string text;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    if (i) text.push_back(' ');
    text += vocabulary.word(doc.tokens[i]);
  }
  return text;
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusKm = 6371.0088;
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * kRad;
  const double dlon = (lon2 - lon1) * kRad;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * kRad) * std::cos(lat2 * kRad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

LocationRegistry::LocationRegistry(std::vector<Location> locations) : locations_(std::move(locations)) {
  const std::size_t n = locations_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& loc = locations_[i];
    if (!(loc.latitude >= -90.0 && loc.latitude <= 90.0) || !(loc.longitude >= -180.0 && loc.longitude <= 180.0)) {
      throw Error("location '" + loc.zipcode + "' has out-of-range coordinates");
    }
    if (!ids_.emplace(loc.zipcode, static_cast<LocationId>(i)).second) {
      throw Error("duplicate location id '" + loc.zipcode + "'");
    }
  }
  order_.resize(n * n);
  std::vector<double> dist(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t j = 0; j < n; ++j) dist[j] = distance_km(static_cast<LocationId>(c), static_cast<LocationId>(j));
    auto row = order_.begin() + static_cast<std::ptrdiff_t>(c * n);
    for (std::size_t j = 0; j < n; ++j) row[static_cast<std::ptrdiff_t>(j)] = static_cast<LocationId>(j);
    // The center has distance exactly 0 and the lowest rank among any ties.
    std::sort(row, row + static_cast<std::ptrdiff_t>(n), [&](LocationId a, LocationId b) {
      const bool a_center = a == c;
      const bool b_center = b == c;
      if (a_center != b_center) return a_center;
      if (dist[a] != dist[b]) return dist[a] < dist[b];
      return a < b;
    });
  }
}

std::optional<LocationId> LocationRegistry::find(std::string_view zipcode) const {
  if (auto it = ids_.find(std::string(zipcode)); it != ids_.end()) return it->second;
  return std::nullopt;
}

double LocationRegistry::distance_km(LocationId a, LocationId b) const {
  if (a == b) return 0.0;
  const auto& x = at(a);
  const auto& y = at(b);
  return haversine_km(x.latitude, x.longitude, y.latitude, y.longitude);
}

std::span<const LocationId> LocationRegistry::neighbors(LocationId center) const {
  if (center >= size()) throw Error("unknown location index " + std::to_string(center));
  return {order_.data() + static_cast<std::size_t>(center) * size(), size()};
}

std::vector<LocationId> LocationRegistry::neighborhood(LocationId center, std::size_t size) const {
  if (size < 1 || size > this->size()) {
    throw Error("neighborhood size " + std::to_string(size) + " outside [1, " + std::to_string(this->size()) + "]");
  }
  const auto all = neighbors(center);
  return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size)};
}

IngestResult ingest(std::span<const RawRecord> records, const LocationRegistry& registry, Day split_day) {
  IngestResult result;
  auto& corpus = result.corpus;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const auto loc = registry.find(rec.zipcode);
    if (!loc) {
      result.rejected.push_back("record " + std::to_string(i) + " (" + rec.id + "): unknown location '" +
                                rec.zipcode + "'");
      continue;
    }
    Document doc;
    doc.id = rec.id.empty() ? "doc-" + std::to_string(i) : rec.id;
    doc.day = rec.day;
    doc.location = *loc;
    doc.label = rec.label;
    for (const auto& tok : tokenize(rec.text)) doc.tokens.push_back(corpus.vocabulary.add(tok));
    (doc.day < split_day ? corpus.background : corpus.foreground).push_back(std::move(doc));
  }
  if (corpus.size() == 0) throw Error("ingest produced an empty corpus");
  return result;
}

std::vector<RawRecord> read_records_jsonl(std::istream& in) {
  std::vector<RawRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      RawRecord rec;
      rec.text = j.at("text").get<std::string>();
      rec.day = parse_date(j.at("date").get<std::string>());
      rec.zipcode = j.at("zipcode").get<std::string>();
      if (j.contains("id")) rec.id = j.at("id").get<std::string>();
      if (j.contains("label")) rec.label = j.at("label").get<std::string>();
      records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

std::vector<RawRecord> read_records_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  return read_records_jsonl(in);
}

void write_records_jsonl(std::ostream& out, std::span<const RawRecord> records) {
  for (const auto& rec : records) {
    nlohmann::ordered_json j;
    j["id"] = rec.id;
    j["text"] = rec.text;
    j["date"] = format_date(rec.day);
    j["zipcode"] = rec.zipcode;
    if (!rec.label.empty()) j["label"] = rec.label;
    out << j.dump() << '\n';
  }
}

std::vector<RawRecord> to_records(const Corpus& corpus, const LocationRegistry& registry) {
  std::vector<RawRecord> records;
  records.reserve(corpus.size());
  for (const auto* part : {&corpus.background, &corpus.foreground}) {
    for (const auto& doc : *part) {
      records.push_back({doc.id, corpus.text_of(doc), doc.day, registry.at(doc.location).zipcode, doc.label});
    }
  }
  return records;
}

LocationRegistry read_registry_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("registry CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "zipcode,latitude,longitude") throw Error("registry CSV header must be 'zipcode,latitude,longitude'");
  std::vector<Location> locations;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    Location loc;
    std::string lat;
    std::string lon;
    if (!std::getline(row, loc.zipcode, ',') || !std::getline(row, lat, ',') || !std::getline(row, lon)) {
      throw Error("registry line " + std::to_string(lineno) + ": expected 3 fields");
    }
    try {
      std::size_t used_lat = 0;
      std::size_t used_lon = 0;
      loc.latitude = std::stod(lat, &used_lat);
      loc.longitude = std::stod(lon, &used_lon);
      if (used_lat != lat.size() || used_lon != lon.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw Error("registry line " + std::to_string(lineno) + ": malformed coordinates");
    }
    locations.push_back(std::move(loc));
  }
  return LocationRegistry(std::move(locations));
}

LocationRegistry read_registry_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open registry file '" + path + "'");
  return read_registry_csv(in);
}

void write_registry_csv(std::ostream& out, const LocationRegistry& registry) {
  out << "zipcode,latitude,longitude\n";
  out << std::setprecision(10);
  for (const auto& loc : registry.locations()) out << loc.zipcode << ',' << loc.latitude << ',' << loc.longitude << '\n';
}

}  // namespace scss
