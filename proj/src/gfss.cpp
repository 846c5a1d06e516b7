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

#include "scss/gfss.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

namespace scss {

namespace {

double log_add_exp(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

GfssPrior GfssPrior::defaults(const LocationRegistry& registry, double p) {
  GfssPrior prior;
  prior.p = p;
  const std::size_t max_size = (registry.size() + 1) / 2;
  for (std::size_t n = 1; n <= std::max<std::size_t>(max_size, 1); ++n) prior.sizes.push_back(n);
  return prior;
}

void GfssPrior::validate(const LocationRegistry& registry) const {
  if (!(p > 0.0 && p <= 1.0)) throw Error("sparsity p must lie in (0, 1]");
  if (sizes.empty()) throw Error("no neighborhood sizes to scan");
  for (std::size_t n : sizes) {
    if (n < 1 || n > registry.size()) throw Error("neighborhood size outside [1, |Z|]");
  }
  for (LocationId c : centers) {
    if (c >= registry.size()) throw Error("scan center outside the registry");
  }
}

const NeighborhoodScore& NeighborhoodPosterior::best() const {
  if (scores.empty()) throw Error("empty neighborhood posterior");
  return *std::max_element(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    return a.log_score < b.log_score;
  });
}

double document_log_likelihood(std::span<const WordId> tokens, const DocTopicEstimate& theta, const TopicModel& model,
                               double floor) {
  double ll = 0.0;
  for (WordId w : tokens) {
    double p = 0.0;
    for (std::size_t k = theta.topics.begin; k < theta.topics.end; ++k) {
      p += theta.theta[k - theta.topics.begin] * model.at(k, w);
    }
    ll += std::log(std::max(p, floor));
  }
  return ll;
}

double log_likelihood_ratio(std::span<const WordId> tokens, const DocTopicEstimate& theta_full,
                            const DocTopicEstimate& theta_background, const TopicModel& model, double floor) {
  return document_log_likelihood(tokens, theta_full, model, floor) -
         document_log_likelihood(tokens, theta_background, model, floor);
}

double smoothed_log_factor(double log_lr, double p) {
  if (p >= 1.0) return log_lr;
  return log_add_exp(std::log1p(-p), std::log(p) + log_lr);
}

double neighborhood_score(std::span<const double> log_lrs, double p) {
  double s = 0.0;
  for (double l : log_lrs) s += smoothed_log_factor(l, p);
  return s;
}

std::vector<double> location_log_lrs(const LikelihoodRatios& lrs, std::span<const LocationId> doc_locations,
                                     std::size_t num_locations) {
  if (doc_locations.size() != lrs.log_lr.size()) throw Error("one location per document is required");
  std::vector<double> out(num_locations, 0.0);
  for (std::size_t i = 0; i < doc_locations.size(); ++i) {
    if (doc_locations[i] >= num_locations) throw Error("document mapped to an unregistered location");
    out[doc_locations[i]] += lrs.log_lr[i];
  }
  return out;
}

NeighborhoodPosterior posterior_from_locations(std::span<const double> location_log_lr, const GfssPrior& prior,
                                               const LocationRegistry& registry) {
  prior.validate(registry);
  const std::size_t nloc = registry.size();
  if (location_log_lr.size() != nloc) throw Error("one log LR per location is required");
  const double p = prior.p;

  std::vector<double> factor(nloc);
  for (std::size_t j = 0; j < nloc; ++j) factor[j] = smoothed_log_factor(location_log_lr[j], p);

  std::vector<LocationId> centers = prior.centers;
  if (centers.empty()) {
    centers.resize(nloc);
    std::iota(centers.begin(), centers.end(), LocationId{0});
  }
  std::vector<std::size_t> sizes = prior.sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  NeighborhoodPosterior post;
  post.scores.reserve(centers.size() * sizes.size());
  for (LocationId c : centers) {
    const auto order = registry.neighbors(c);
    double running = 0.0;
    std::size_t filled = 0;
    for (std::size_t n : sizes) {
      for (; filled < n; ++filled) running += factor[order[filled]];
      post.scores.push_back({c, n, running, 0.0});
    }
  }

  double top = -INFINITY;
  for (const auto& s : post.scores) top = std::max(top, s.log_score);
  if (top == -INFINITY) {
    // Every neighborhood has zero evidence; fall back to the uniform prior.
    for (auto& s : post.scores) s.log_score = 0.0;
    top = 0.0;
  }
  double total = 0.0;
  for (const auto& s : post.scores) total += std::exp(s.log_score - top);
  post.log_normalizer = top + std::log(total);
  for (auto& s : post.scores) s.posterior = std::exp(s.log_score - post.log_normalizer);

  // Pr(E_j): neighborhoods containing j with j forced into the subset, i.e.
  // the neighborhood evidence with j's factor replaced by p * LR_j.
  post.location_scores.assign(nloc, 0.0);
  const double log_p = std::log(p);
  for (const auto& s : post.scores) {
    const auto order = registry.neighbors(s.center);
    for (std::size_t r = 0; r < s.size; ++r) {
      const LocationId j = order[r];
      const double forced = log_p + location_log_lr[j];
      if (forced == -INFINITY) continue;
      post.location_scores[j] += std::exp(s.log_score - factor[j] + forced - post.log_normalizer);
    }
  }
  for (double& v : post.location_scores) v = std::clamp(v, 0.0, 1.0);
  return post;
}

NeighborhoodPosterior posterior(const LikelihoodRatios& lrs, const GfssPrior& prior, const LocationRegistry& registry,
                                std::span<const LocationId> doc_locations) {
  const auto per_location = location_log_lrs(lrs, doc_locations, registry.size());
  return posterior_from_locations(per_location, prior, registry);
}

std::vector<double> location_posterior(const LikelihoodRatios& lrs, const GfssPrior& prior,
                                       const LocationRegistry& registry, std::span<const LocationId> doc_locations) {
  return posterior(lrs, prior, registry, doc_locations).location_scores;
}

void write_neighborhood_csv(std::ostream& out, const NeighborhoodPosterior& post, const LocationRegistry& registry) {
  std::vector<const NeighborhoodScore*> rows;
  for (const auto& s : post.scores) rows.push_back(&s);
  std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) { return a->posterior > b->posterior; });
  out << "center,size,posterior\n" << std::setprecision(12);
  for (const auto* s : rows) out << registry.at(s->center).zipcode << ',' << s->size << ',' << s->posterior << '\n';
}

void write_location_csv(std::ostream& out, const NeighborhoodPosterior& post, const LocationRegistry& registry) {
  std::vector<LocationId> order(post.location_scores.size());
  std::iota(order.begin(), order.end(), LocationId{0});
  std::stable_sort(order.begin(), order.end(), [&](LocationId a, LocationId b) {
    return post.location_scores[a] > post.location_scores[b];
  });
  out << "location,posterior\n" << std::setprecision(12);
  for (LocationId j : order) out << registry.at(j).zipcode << ',' << post.location_scores[j] << '\n';
}

}  // namespace scss
