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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace scss {

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return derive_seed(derive_seed(seed, a), b);
}

/// Seeded pseudo-random source shared by every sampler in the library.
///
/// Uniform draws are computed from the raw 64-bit engine output so they do
/// not depend on the standard library's distribution implementations. Gamma
/// draws (Dirichlet, Beta) go through std::gamma_distribution.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n) {
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Draws an index proportionally to non-negative weights whose sum is `total`.
  std::size_t categorical(std::span<const double> weights, double total) {
    double u = uniform() * total;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      u -= weights[k];
      if (u < 0.0) return k;
    }
    // Round-off: return the last positive-weight entry.
    for (std::size_t k = weights.size(); k-- > 0;) {
      if (weights[k] > 0.0) return k;
    }
    return weights.size() - 1;
  }

  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    return categorical(weights, total);
  }

  double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  std::vector<double> dirichlet(std::span<const double> alpha) {
    // Gamma draws are taken in log space; small shapes would otherwise
    // underflow to exact zeros.
    std::vector<double> out(alpha.size());
    double top = -INFINITY;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      out[i] = log_gamma_draw(alpha[i]);
      top = std::max(top, out[i]);
    }
    double total = 0.0;
    for (double& v : out) {
      v = std::exp(v - top);
      total += v;
    }
    for (double& v : out) v /= total;
    return out;
  }

  std::vector<double> symmetric_dirichlet(std::size_t dim, double concentration) {
    const std::vector<double> alpha(dim, concentration);
    return dirichlet(alpha);
  }

  std::uint64_t poisson(double mean) { return std::poisson_distribution<std::uint64_t>(mean)(engine_); }

 private:
  double log_gamma_draw(double shape) {
    if (shape >= 1.0) return std::log(gamma(shape));
    // G(a) = G(a + 1) * U^(1/a)
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return std::log(gamma(shape + 1.0)) + std::log(u) / shape;
  }

  std::mt19937_64 engine_;
};

}  // namespace scss
