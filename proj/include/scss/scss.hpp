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

// Alternating inference for spatially compact semantic scan: spatial
// posterior, Bernoulli resampling of the per-document indicator delta, and a
// foreground topic refit restricted to documents with delta = 1.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "scss/corpus.hpp"
#include "scss/gfss.hpp"
#include "scss/lda.hpp"
#include "scss/rng.hpp"
#include "scss/semantic_scan.hpp"

namespace scss {

struct DeltaAssignment {
  std::vector<std::uint8_t> delta;  // one per foreground document

  std::size_t count() const noexcept;
  /// Number of documents whose indicator differs.
  std::size_t symmetric_difference(const DeltaAssignment& other) const;
};

struct ScssConfig {
  ScanConfig scan = ScanConfig::emerging(25, 25);
  /// Scan grid and sparsity; an empty size list means GfssPrior::defaults.
  GfssPrior prior;
  std::size_t max_iterations = 10;
  /// Stop once the delta sets of consecutive iterations differ on fewer
  /// than this fraction of the foreground documents.
  double convergence_fraction = 0.01;
  std::size_t threads = 1;
};

struct IterationDiagnostics {
  std::size_t iteration = 0;
  std::size_t active_documents = 0;  // |delta = 1| used by this iteration's refit
  LocationId top_center = 0;
  std::size_t top_size = 0;
  double top_posterior = 0.0;
  double top_log_score = 0.0;
  bool refit_skipped = false;
  double elapsed_seconds = 0.0;
};

struct ScssState {
  TopicModel model;
  std::vector<DocTopicEstimate> theta_full;
  std::vector<DocTopicEstimate> theta_background;
  LikelihoodRatios lrs;
  NeighborhoodPosterior posterior;
  /// Indicators sampled from the final posterior.
  DeltaAssignment delta;
  /// Indicators that selected the documents of the final refit.
  DeltaAssignment refit_delta;
  CountTables refit_tables;
  std::size_t iteration = 0;
  bool converged = false;
  std::vector<IterationDiagnostics> diagnostics;
};

/// delta_i ~ Bernoulli(Pr(E_loc(i))) independently per document.
DeltaAssignment sample_delta(std::span<const double> location_posteriors, std::span<const Document* const> docs,
                             Rng& rng);

/// Runs the alternating loop from delta = 1 for every document.
ScssState run(std::span<const Document* const> foreground, const TopicModel& background,
              const LocationRegistry& registry, const ScssConfig& config);
ScssState run(std::span<const Document> foreground, const TopicModel& background, const LocationRegistry& registry,
              const ScssConfig& config);

/// One row per iteration: iteration,active_documents,top_center,top_size,
/// top_posterior,refit_skipped,elapsed_seconds.
void write_diagnostics_csv(std::ostream& out, const ScssState& state, const LocationRegistry& registry);

}  // namespace scss
