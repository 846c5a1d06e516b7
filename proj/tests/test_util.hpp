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

// Small fixtures shared by the unit tests.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "scss/corpus.hpp"

namespace scss::testing {

inline constexpr double kKmPerDegree = 111.1950802335329;  // mean Earth radius 6371.0088 km

/// Locations on a north-south line, `km[i]` kilometres from the origin.
inline LocationRegistry line_registry(const std::vector<double>& km) {
  std::vector<Location> locs;
  for (std::size_t i = 0; i < km.size(); ++i) {
    locs.push_back({"z" + std::to_string(i), 40.0 + km[i] / kKmPerDegree, -80.0});
  }
  return LocationRegistry(std::move(locs));
}

inline Document make_doc(std::vector<WordId> tokens, LocationId loc = 0, Day day = 0, std::string id = "") {
  Document d;
  d.id = std::move(id);
  d.tokens = std::move(tokens);
  d.location = loc;
  d.day = day;
  return d;
}

inline std::vector<const Document*> pointers(const std::vector<Document>& docs) {
  std::vector<const Document*> out;
  for (const auto& d : docs) out.push_back(&d);
  return out;
}

}  // namespace scss::testing
