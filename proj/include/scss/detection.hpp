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

// Evaluation harness: moving-window detection for every method, spatial and
// document metrics, threshold calibration on event-free days and
// detection-power curves.

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scss/baselines.hpp"
#include "scss/corpus.hpp"
#include "scss/lda.hpp"
#include "scss/outbreak.hpp"
#include "scss/scss.hpp"
#include "scss/semantic_scan.hpp"

namespace scss {

enum class Method { kScss, kSsEmerging, kSsDynamic, kSsStatic, kNaiveBayes };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);
std::span<const Method> all_methods();
/// Comma-separated list of valid method names.
std::string method_names();

struct DetectionConfig {
  /// Topic counts, hyperparameters, sweep budgets and the base seed. The
  /// variant field is ignored; each method picks its own.
  ScanConfig scan = ScanConfig::emerging(25, 25);
  double sparsity = 0.5;
  std::size_t max_iterations = 10;
  double convergence_fraction = 0.01;
  std::size_t window_days = 3;
  /// Locations whose posterior exceeds this are reported by SCSS.
  double location_threshold = 0.5;
  /// Largest neighborhood / scan cluster; 0 means ceil(|Z| / 2).
  std::size_t max_cluster_size = 0;
  std::size_t threads = 1;
};

struct DetectionOutput {
  Day day = 0;
  double score = 0.0;
  std::vector<LocationId> locations;   // sorted
  std::vector<std::string> documents;  // sorted ids
};

/// Runs the detection methods over one corpus. The background corpus is
/// fixed; each evaluated day uses the foreground documents of the trailing
/// window ending on that day.
class Detector {
 public:
  /// Fits the background topics from corpus.background unless `background`
  /// is supplied.
  Detector(const Corpus& corpus, const LocationRegistry& registry, DetectionConfig config,
           std::optional<TopicModel> background = std::nullopt);

  /// Fitted on first use.
  const TopicModel& background_model() const;
  const DetectionConfig& config() const { return config_; }

  /// First day whose full window lies inside the foreground.
  Day first_detectable_day() const noexcept { return first_day_; }
  std::vector<const Document*> window(Day day) const;

  DetectionOutput detect(Method method, Day day) const;
  /// Days whose window starts before the foreground are appended to
  /// `skipped` instead of being evaluated.
  std::vector<DetectionOutput> run_windows(Method method, Day first, Day last,
                                           std::vector<Day>* skipped = nullptr) const;

 private:
  DetectionOutput detect_scss(std::span<const Document* const> docs, std::uint64_t stream) const;
  DetectionOutput detect_topics(Method method, std::span<const Document* const> docs, std::uint64_t stream) const;
  DetectionOutput detect_naive_bayes(std::span<const Document* const> docs) const;
  /// Expected counts of flagged documents per location for a window whose
  /// flagged total is `flagged` out of `total` documents.
  std::vector<double> baseline(std::size_t flagged, std::size_t total) const;

  const Corpus& corpus_;
  const LocationRegistry& registry_;
  DetectionConfig config_;
  mutable std::optional<TopicModel> background_;
  std::vector<const Document*> background_docs_;
  std::vector<double> daily_rate_;  // background documents per day per location
  Day first_day_ = 0;
  std::size_t max_cluster_ = 0;
};

/// Index of the single topic under which the document is most likely.
std::size_t max_likelihood_topic(const TopicModel& model, std::span<const WordId> tokens, TopicRange topics);

struct MetricRow {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double overlap = 0.0;
};

/// Ratios with a zero denominator are 1 when tp = fp = fn = 0 and 0 otherwise.
MetricRow make_metric_row(std::size_t tp, std::size_t fp, std::size_t fn);
MetricRow spatial_metrics(std::span<const LocationId> detected, std::span<const LocationId> truth);
MetricRow document_metrics(std::span<const std::string> detected, std::span<const std::string> truth);

/// Injected ids whose timestamp falls in the window ending on outbreak day
/// `outbreak_day` (1-based).
std::vector<std::string> injected_in_window(const OutbreakGroundTruth& truth, std::size_t outbreak_day,
                                            std::size_t window_days);

inline constexpr double kDaysPerYear = 365.0;
inline const std::vector<double> kDefaultFpGrid{1, 2, 4, 8, 12, 26, 52};

/// Alarm threshold admitting `fp_per_year` false alarms per year on the null
/// scores: a day alarms when its score is strictly greater.
double calibrated_threshold(std::span<const double> null_scores, double fp_per_year);

struct PowerPoint {
  double fp_per_year = 0.0;
  double threshold = 0.0;
  double fraction_detected = 0.0;
  /// Mean first alarm day; undetected outbreaks count as the duration.
  double days_to_detect = 0.0;
  std::size_t undetected = 0;
};

/// `outbreak_scores[i][d]` is the score of outbreak i on outbreak day d + 1.
std::vector<PowerPoint> power_curve(std::span<const double> null_scores,
                                    std::span<const std::vector<double>> outbreak_scores,
                                    std::span<const double> fp_grid = kDefaultFpGrid);

struct OutbreakDayResult {
  std::size_t outbreak_day = 0;
  DetectionOutput output;
  MetricRow spatial;
  MetricRow document;
};

/// Runs `method` on outbreak days 1..duration of one scenario.
std::vector<OutbreakDayResult> evaluate_outbreak(const Detector& detector, Method method,
                                                 const OutbreakGroundTruth& truth);

/// The scenario's corpus with its injected documents removed.
Corpus remove_injected(const Corpus& corpus, const OutbreakGroundTruth& truth);

struct MethodEvaluation {
  Method method = Method::kScss;
  std::vector<std::vector<OutbreakDayResult>> scenarios;  // parallel to the input
  std::vector<double> null_scores;
  std::vector<std::vector<double>> outbreak_scores;
  std::vector<PowerPoint> curve;
  /// Set instead of `curve` when power curves cannot be computed.
  std::string curve_error;
};

/// Scores every method on every scenario. Null scores come from each
/// scenario's corpus with the outbreak removed, over every detectable day,
/// and are pooled across scenarios. Scenarios run in parallel with
/// config.threads workers.
std::vector<MethodEvaluation> evaluate_benchmark(std::span<const Scenario> scenarios,
                                                 const LocationRegistry& registry, std::span<const Method> methods,
                                                 const DetectionConfig& config,
                                                 std::span<const double> fp_grid = kDefaultFpGrid);

/// Per-day mean of the metric ratios across scenarios. Counts are summed.
/// Every scenario must cover the same outbreak days.
std::vector<OutbreakDayResult> mean_by_day(std::span<const std::vector<OutbreakDayResult>> scenarios);

void write_detections_csv(std::ostream& out, Method method, std::span<const DetectionOutput> outputs,
                          const LocationRegistry& registry);
void write_metrics_header(std::ostream& out);
void write_metrics_rows(std::ostream& out, Method method, std::span<const OutbreakDayResult> rows);
void write_power_header(std::ostream& out);
void write_power_rows(std::ostream& out, Method method, std::span<const PowerPoint> points);

}  // namespace scss
