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

#include "scss/baselines.hpp"

#include <cmath>

namespace scss {

NbModel nb_fit(std::span<const Document* const> background, std::span<const Document* const> foreground,
               std::size_t vocab_size) {
  if (background.empty() || foreground.empty()) throw Error("naive Bayes needs documents in both classes");
  NbModel m;
  m.vocab_size = vocab_size;
  const std::array<std::span<const Document* const>, 2> classes{background, foreground};
  const double total_docs = static_cast<double>(background.size() + foreground.size());
  for (int c = 0; c < 2; ++c) {
    std::vector<double> counts(vocab_size, 1.0);
    double total = static_cast<double>(vocab_size);
    for (const auto* doc : classes[c]) {
      for (WordId w : doc->tokens) {
        counts.at(w) += 1.0;
        total += 1.0;
      }
    }
    for (double& v : counts) v = std::log(v / total);
    m.log_word_prob[c] = std::move(counts);
    m.log_prior[c] = std::log(static_cast<double>(classes[c].size()) / total_docs);
  }
  return m;
}

double nb_log_joint(const NbModel& model, std::span<const WordId> tokens, int cls) {
  const auto& lw = model.log_word_prob.at(static_cast<std::size_t>(cls));
  double s = model.log_prior[static_cast<std::size_t>(cls)];
  for (WordId w : tokens) s += lw.at(w);
  return s;
}

int nb_predict(const NbModel& model, std::span<const WordId> tokens) {
  return nb_log_joint(model, tokens, 1) > nb_log_joint(model, tokens, 0) ? 1 : 0;
}

double poisson_score(double cases, double baseline) {
  if (cases <= baseline) return 0.0;
  return cases * std::log(cases / baseline) + baseline - cases;
}

CircularScanResult circular_scan(std::span<const double> cases, std::span<const double> baseline,
                                 const LocationRegistry& registry, std::size_t max_size) {
  const std::size_t n = registry.size();
  if (cases.size() != n || baseline.size() != n) throw Error("circular scan needs one count per location");
  for (std::size_t j = 0; j < n; ++j) {
    if (cases[j] > 0.0 && !(baseline[j] > 0.0)) throw Error("positive cases at a location with zero baseline");
  }
  if (max_size == 0 || max_size > n) max_size = n;
  CircularScanResult best;
  for (LocationId c = 0; c < n; ++c) {
    const auto order = registry.neighbors(c);
    double C = 0.0;
    double B = 0.0;
    for (std::size_t r = 0; r < max_size; ++r) {
      C += cases[order[r]];
      B += baseline[order[r]];
      const double f = poisson_score(C, B);
      if (f > best.statistic) {
        best.statistic = f;
        best.center = c;
        best.size = r + 1;
      }
    }
  }
  if (best.size > 0) best.cluster = registry.neighborhood(best.center, best.size);
  return best;
}

}  // namespace scss
