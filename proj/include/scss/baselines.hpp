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

// Baseline detectors: a multinomial naive Bayes background/foreground
// document classifier and the circular expectation-based Poisson scan.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "scss/corpus.hpp"

namespace scss {

struct NbModel {
  std::size_t vocab_size = 0;
  std::array<std::vector<double>, 2> log_word_prob;  // add-one smoothed
  std::array<double, 2> log_prior{};
};

/// Class 0 = background documents, class 1 = foreground documents.
NbModel nb_fit(std::span<const Document* const> background, std::span<const Document* const> foreground,
               std::size_t vocab_size);
double nb_log_joint(const NbModel& model, std::span<const WordId> tokens, int cls);
/// Argmax class; ties go to class 0.
int nb_predict(const NbModel& model, std::span<const WordId> tokens);

struct CircularScanResult {
  LocationId center = 0;
  std::size_t size = 0;  // number of nearest neighbors in the cluster
  std::vector<LocationId> cluster;
  double statistic = 0.0;
};

/// C log(C / B) + B - C when C > B, else 0.
double poisson_score(double cases, double baseline);

/// Maximizes poisson_score over every center and every distance-ordered
/// prefix of at most `max_size` locations (0 means |Z|).
CircularScanResult circular_scan(std::span<const double> cases, std::span<const double> baseline,
                                 const LocationRegistry& registry, std::size_t max_size = 0);

}  // namespace scss
