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

// Bayesian spatial inference over circular neighborhoods with sparse subsets
// (generalized fast subset sums).
//
// A neighborhood S_cn is the n nearest locations to center c. Its evidence
// marginalizes over every subset S of S_cn with inclusion prior p, which
// factorizes into the product over locations of (1 - p + p * LR_loc), where
// LR_loc is the product of the likelihood ratios of the documents observed
// at that location.

#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "scss/corpus.hpp"
#include "scss/lda.hpp"

namespace scss {

inline constexpr double kDefaultProbabilityFloor = 1e-12;

struct LikelihoodRatios {
  std::vector<double> log_lr;  // one per foreground document
};

struct GfssPrior {
  double p = 0.5;
  std::vector<std::size_t> sizes;
  /// Candidate centers; empty means every location.
  std::vector<LocationId> centers;

  /// All centers with sizes 1..ceil(|Z|/2).
  static GfssPrior defaults(const LocationRegistry& registry, double p = 0.5);
  void validate(const LocationRegistry& registry) const;
};

struct NeighborhoodScore {
  LocationId center = 0;
  std::size_t size = 0;
  double log_score = 0.0;  // unnormalized, relative to the all-LR=1 baseline of 0
  double posterior = 0.0;
};

struct NeighborhoodPosterior {
  std::vector<NeighborhoodScore> scores;
  std::vector<double> location_scores;  // Pr(E_j | data), indexed by location
  double log_normalizer = 0.0;

  const NeighborhoodScore& best() const;
};

/// Sum over tokens of log(sum_k theta_k * phi_{k,w}); per-word probabilities
/// are floored at `floor`.
double document_log_likelihood(std::span<const WordId> tokens, const DocTopicEstimate& theta,
                               const TopicModel& model, double floor = kDefaultProbabilityFloor);

/// log LR of the full model over the background-only model.
double log_likelihood_ratio(std::span<const WordId> tokens, const DocTopicEstimate& theta_full,
                            const DocTopicEstimate& theta_background, const TopicModel& model,
                            double floor = kDefaultProbabilityFloor);

/// log(1 - p + p * exp(log_lr)), evaluated without overflow.
double smoothed_log_factor(double log_lr, double p);

/// Sum of smoothed log factors: the log of the subset-sum evidence.
double neighborhood_score(std::span<const double> log_lrs, double p);

/// Aggregates per-document log LRs to per-location log LRs.
std::vector<double> location_log_lrs(const LikelihoodRatios& lrs, std::span<const LocationId> doc_locations,
                                     std::size_t num_locations);

NeighborhoodPosterior posterior(const LikelihoodRatios& lrs, const GfssPrior& prior, const LocationRegistry& registry,
                                std::span<const LocationId> doc_locations);
/// Same computation starting from per-location log LRs.
NeighborhoodPosterior posterior_from_locations(std::span<const double> location_log_lr, const GfssPrior& prior,
                                               const LocationRegistry& registry);

std::vector<double> location_posterior(const LikelihoodRatios& lrs, const GfssPrior& prior,
                                       const LocationRegistry& registry, std::span<const LocationId> doc_locations);

/// center,size,posterior and location,posterior tables, sorted descending.
void write_neighborhood_csv(std::ostream& out, const NeighborhoodPosterior& post, const LocationRegistry& registry);
void write_location_csv(std::ostream& out, const NeighborhoodPosterior& post, const LocationRegistry& registry);

}  // namespace scss
