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

#include "scss/scss.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>

#include "scss/parallel.hpp"

namespace scss {

namespace {
constexpr std::uint64_t kBackgroundFoldStream = 0xb0;
constexpr std::uint64_t kFullFoldStream = 0xf0;
constexpr std::uint64_t kDeltaStream = 0xde;
}  // namespace

std::size_t DeltaAssignment::count() const noexcept {
  std::size_t n = 0;
  for (auto d : delta) n += d ? 1 : 0;
  return n;
}

std::size_t DeltaAssignment::symmetric_difference(const DeltaAssignment& other) const {
  if (other.delta.size() != delta.size()) throw Error("delta assignments cover different documents");
  std::size_t n = 0;
  for (std::size_t i = 0; i < delta.size(); ++i) n += (delta[i] != 0) != (other.delta[i] != 0) ? 1 : 0;
  return n;
}

DeltaAssignment sample_delta(std::span<const double> location_posteriors, std::span<const Document* const> docs,
                             Rng& rng) {
  DeltaAssignment out;
  out.delta.reserve(docs.size());
  for (const auto* doc : docs) {
    const double pr = location_posteriors[doc->location];
    out.delta.push_back(pr > 0.0 && rng.bernoulli(pr) ? 1 : 0);
  }
  return out;
}

ScssState run(std::span<const Document* const> foreground, const TopicModel& background,
              const LocationRegistry& registry, const ScssConfig& config) {
  if (foreground.empty()) throw Error("scss: foreground is empty");
  const auto& scan = config.scan;
  if (background.num_topics() != scan.num_background_topics) {
    throw Error("scss: background model topic count does not match the config");
  }
  GfssPrior prior = config.prior;
  if (prior.sizes.empty()) {
    const double p = prior.p;
    prior = GfssPrior::defaults(registry, p);
    prior.centers = config.prior.centers;
  }
  prior.validate(registry);

  const std::size_t nf = foreground.size();
  std::vector<LocationId> locations(nf);
  for (std::size_t i = 0; i < nf; ++i) locations[i] = foreground[i]->location;

  ScssState state;
  // phi_b never changes inside the loop, so theta under the background-only
  // model is computed once.
  state.theta_background.resize(nf);
  parallel_for(nf, config.threads, [&](std::size_t i) {
    Rng rng(derive_seed(scan.seed, kBackgroundFoldStream, i));
    state.theta_background[i] =
        fold_in(background, foreground[i]->tokens, background.background_topics(), scan.fold_in_sweeps, rng);
  });

  DeltaAssignment delta{std::vector<std::uint8_t>(nf, 1)};
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    const auto start = std::chrono::steady_clock::now();
    IterationDiagnostics diag;
    diag.iteration = it;

    std::vector<const Document*> active;
    for (std::size_t i = 0; i < nf; ++i) {
      if (delta.delta[i]) active.push_back(foreground[i]);
    }
    diag.active_documents = active.size();
    diag.refit_skipped = active.empty();
    // With no active documents the refit runs zero sweeps and the foreground
    // rows stay at the prior mean.
    auto fit = fit_foreground(background, active, scan, it);
    state.model = std::move(fit.model);
    state.refit_tables = std::move(fit.tables);
    state.refit_delta = delta;

    state.theta_full.resize(nf);
    state.lrs.log_lr.assign(nf, 0.0);
    parallel_for(nf, config.threads, [&](std::size_t i) {
      Rng rng(derive_seed(scan.seed, kFullFoldStream + (it << 8), i));
      state.theta_full[i] = fold_in(state.model, foreground[i]->tokens, state.model.all_topics(),
                                    scan.fold_in_sweeps, rng);
      state.lrs.log_lr[i] =
          log_likelihood_ratio(foreground[i]->tokens, state.theta_full[i], state.theta_background[i], state.model);
    });

    state.posterior = posterior(state.lrs, prior, registry, locations);
    Rng delta_rng(derive_seed(scan.seed, kDeltaStream, it));
    DeltaAssignment next = sample_delta(state.posterior.location_scores, foreground, delta_rng);

    const auto& top = state.posterior.best();
    diag.top_center = top.center;
    diag.top_size = top.size;
    diag.top_posterior = top.posterior;
    diag.top_log_score = top.log_score;
    diag.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    state.diagnostics.push_back(diag);
    state.iteration = it;

    const bool stable =
        static_cast<double>(next.symmetric_difference(delta)) < config.convergence_fraction * static_cast<double>(nf);
    delta = std::move(next);
    if (stable) {
      state.converged = true;
      break;
    }
  }
  state.delta = std::move(delta);
  return state;
}

ScssState run(std::span<const Document> foreground, const TopicModel& background, const LocationRegistry& registry,
              const ScssConfig& config) {
  std::vector<const Document*> ptrs;
  ptrs.reserve(foreground.size());
  for (const auto& d : foreground) ptrs.push_back(&d);
  return run(ptrs, background, registry, config);
}

void write_diagnostics_csv(std::ostream& out, const ScssState& state, const LocationRegistry& registry) {
  out << "iteration,active_documents,top_center,top_size,top_posterior,refit_skipped,elapsed_seconds\n";
  out << std::setprecision(10);
  for (const auto& d : state.diagnostics) {
    out << d.iteration << ',' << d.active_documents << ',' << registry.at(d.top_center).zipcode << ',' << d.top_size
        << ',' << d.top_posterior << ',' << (d.refit_skipped ? 1 : 0) << ',' << d.elapsed_seconds << '\n';
  }
}

}  // namespace scss
