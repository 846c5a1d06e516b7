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

#include "scss/detection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>

#include "scss/parallel.hpp"

namespace scss {

namespace {

constexpr std::array<Method, 5> kMethods{Method::kScss, Method::kSsEmerging, Method::kSsDynamic, Method::kSsStatic,
                                         Method::kNaiveBayes};

template <class T>
MetricRow compare_sets(std::span<const T> detected, std::span<const T> truth) {
  std::vector<T> a(detected.begin(), detected.end());
  std::vector<T> b(truth.begin(), truth.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::vector<T> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  return make_metric_row(both.size(), a.size() - both.size(), b.size() - both.size());
}

std::vector<std::string> sorted_ids(std::span<const Document* const> docs, const std::vector<std::uint8_t>& keep) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (keep[i]) ids.push_back(docs[i]->id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kScss:
      return "scss";
    case Method::kSsEmerging:
      return "ss-emerging";
    case Method::kSsDynamic:
      return "ss-dynamic";
    case Method::kSsStatic:
      return "ss-static";
    case Method::kNaiveBayes:
      return "naive-bayes";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::span<const Method> all_methods() { return kMethods; }

std::string method_names() {
  std::string out;
  for (Method m : kMethods) {
    if (!out.empty()) out += ", ";
    out += to_string(m);
  }
  return out;
}

std::size_t max_likelihood_topic(const TopicModel& model, std::span<const WordId> tokens, TopicRange topics) {
  std::size_t best = topics.begin;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t k = topics.begin; k < topics.end; ++k) {
    double ll = 0.0;
    for (WordId w : tokens) ll += std::log(std::max(model.at(k, w), 1e-300));
    if (ll > best_ll) {
      best_ll = ll;
      best = k;
    }
  }
  return best;
}

Detector::Detector(const Corpus& corpus, const LocationRegistry& registry, DetectionConfig config,
                   std::optional<TopicModel> background)
    : corpus_(corpus), registry_(registry), config_(std::move(config)), background_(std::move(background)) {
  if (config_.window_days == 0) throw Error("detection window must span at least one day");
  if (background_ && background_->vocab_size != corpus.vocabulary.size()) {
    throw Error("background model vocabulary does not match the corpus");
  }
  const std::size_t half = (registry.size() + 1) / 2;
  max_cluster_ = config_.max_cluster_size ? std::min(config_.max_cluster_size, registry.size()) : std::max<std::size_t>(half, 1);

  for (const auto& d : corpus.background) background_docs_.push_back(&d);
  daily_rate_.assign(registry.size(), 0.0);
  if (!corpus.background.empty()) {
    Day lo = corpus.background.front().day;
    Day hi = lo;
    for (const auto& d : corpus.background) {
      lo = std::min(lo, d.day);
      hi = std::max(hi, d.day);
      daily_rate_.at(d.location) += 1.0;
    }
    const double span = static_cast<double>(hi - lo + 1);
    // Locations never seen in the background get half a document.
    for (double& r : daily_rate_) r = std::max(r, 0.5) / span;
  } else {
    daily_rate_.assign(registry.size(), 1.0);
  }

  if (!corpus.foreground.empty()) {
    Day lo = corpus.foreground.front().day;
    for (const auto& d : corpus.foreground) lo = std::min(lo, d.day);
    first_day_ = lo + static_cast<Day>(config_.window_days) - 1;
  }
}

const TopicModel& Detector::background_model() const {
  if (!background_) background_ = fit_background(corpus_.background, corpus_.vocabulary, config_.scan).model;
  return *background_;
}

std::vector<const Document*> Detector::window(Day day) const {
  const Day lo = day - static_cast<Day>(config_.window_days) + 1;
  std::vector<const Document*> docs;
  for (const auto& d : corpus_.foreground) {
    if (d.day >= lo && d.day <= day) docs.push_back(&d);
  }
  return docs;
}

std::vector<double> Detector::baseline(std::size_t flagged, std::size_t total) const {
  std::vector<double> b(daily_rate_.size());
  const double share = total ? static_cast<double>(flagged) / static_cast<double>(total) : 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    b[j] = daily_rate_[j] * static_cast<double>(config_.window_days) * share;
  }
  return b;
}

DetectionOutput Detector::detect(Method method, Day day) const {
  const auto docs = window(day);
  const std::uint64_t stream = derive_seed(static_cast<std::uint64_t>(method), static_cast<std::uint64_t>(day));
  DetectionOutput out;
  if (!docs.empty()) {
    switch (method) {
      case Method::kScss:
        out = detect_scss(docs, stream);
        break;
      case Method::kSsEmerging:
      case Method::kSsDynamic:
      case Method::kSsStatic:
        out = detect_topics(method, docs, stream);
        break;
      case Method::kNaiveBayes:
        out = detect_naive_bayes(docs);
        break;
    }
  }
  out.day = day;
  return out;
}

std::vector<DetectionOutput> Detector::run_windows(Method method, Day first, Day last, std::vector<Day>* skipped) const {
  std::vector<DetectionOutput> outputs;
  for (Day day = first; day <= last; ++day) {
    if (day < first_day_) {
      if (skipped) skipped->push_back(day);
      continue;
    }
    outputs.push_back(detect(method, day));
  }
  return outputs;
}

DetectionOutput Detector::detect_scss(std::span<const Document* const> docs, std::uint64_t stream) const {
  const auto& background = background_model();
  ScssConfig cfg;
  cfg.scan = config_.scan;
  cfg.scan.variant = ScanVariant::kEmerging;
  cfg.scan.num_background_topics = background.num_topics();
  cfg.scan.seed = derive_seed(config_.scan.seed, stream);
  cfg.prior.p = config_.sparsity;
  for (std::size_t n = 1; n <= max_cluster_; ++n) cfg.prior.sizes.push_back(n);
  cfg.max_iterations = config_.max_iterations;
  cfg.convergence_fraction = config_.convergence_fraction;
  cfg.threads = config_.threads;
  const auto state = run(docs, background, registry_, cfg);

  DetectionOutput out;
  out.score = state.posterior.best().log_score;
  for (std::size_t j = 0; j < state.posterior.location_scores.size(); ++j) {
    if (state.posterior.location_scores[j] > config_.location_threshold) {
      out.locations.push_back(static_cast<LocationId>(j));
    }
  }
  out.documents = sorted_ids(docs, state.delta.delta);
  return out;
}

DetectionOutput Detector::detect_topics(Method method, std::span<const Document* const> docs,
                                        std::uint64_t stream) const {
  ScanConfig cfg = config_.scan;
  cfg.seed = derive_seed(config_.scan.seed, stream);
  TopicModel model;
  std::vector<std::size_t> candidates;
  switch (method) {
    case Method::kSsEmerging: {
      const auto& background = background_model();
      cfg.variant = ScanVariant::kEmerging;
      cfg.num_background_topics = background.num_topics();
      model = fit_foreground(background, docs, cfg).model;
      break;
    }
    case Method::kSsDynamic: {
      cfg = ScanConfig::dynamic(config_.scan.num_foreground_topics);
      cfg.alpha = config_.scan.alpha;
      cfg.beta_background = config_.scan.beta_background;
      cfg.beta_foreground = config_.scan.beta_foreground;
      cfg.foreground_sweeps = config_.scan.foreground_sweeps;
      cfg.seed = derive_seed(config_.scan.seed, stream);
      model = fit_foreground(empty_background_model(corpus_.vocabulary, cfg), docs, cfg).model;
      break;
    }
    default:
      model = background_model();
      break;
  }

  const std::size_t T = model.num_topics();
  std::vector<std::size_t> topic(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) topic[i] = max_likelihood_topic(model, docs[i]->tokens, {0, T});

  DetectionOutput out;
  std::vector<std::uint8_t> keep(docs.size(), 0);
  auto scan_flagged = [&](const std::vector<std::uint8_t>& flagged) {
    std::vector<double> cases(registry_.size(), 0.0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (flagged[i]) {
        cases[docs[i]->location] += 1.0;
        ++total;
      }
    }
    if (total == 0) return CircularScanResult{};
    return circular_scan(cases, baseline(total, docs.size()), registry_, max_cluster_);
  };

  CircularScanResult best;
  if (method == Method::kSsEmerging) {
    for (std::size_t i = 0; i < docs.size(); ++i) keep[i] = topic[i] >= model.num_background_topics ? 1 : 0;
    best = scan_flagged(keep);
  } else {
    // One scan per topic; the topic with the strongest cluster is the event.
    std::size_t best_topic = T;
    std::vector<std::uint8_t> flagged(docs.size());
    for (std::size_t k = 0; k < T; ++k) {
      for (std::size_t i = 0; i < docs.size(); ++i) flagged[i] = topic[i] == k ? 1 : 0;
      auto r = scan_flagged(flagged);
      if (r.statistic > best.statistic) {
        best = std::move(r);
        best_topic = k;
      }
    }
    for (std::size_t i = 0; i < docs.size(); ++i) keep[i] = topic[i] == best_topic ? 1 : 0;
  }
  out.score = best.statistic;
  out.locations = best.cluster;
  std::sort(out.locations.begin(), out.locations.end());
  out.documents = sorted_ids(docs, keep);
  return out;
}

DetectionOutput Detector::detect_naive_bayes(std::span<const Document* const> docs) const {
  DetectionOutput out;
  if (background_docs_.empty()) throw Error("naive Bayes needs background documents");
  const auto model = nb_fit(background_docs_, docs, corpus_.vocabulary.size());
  std::vector<std::uint8_t> flagged(docs.size(), 0);
  std::vector<double> cases(registry_.size(), 0.0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (nb_predict(model, docs[i]->tokens) == 1) {
      flagged[i] = 1;
      cases[docs[i]->location] += 1.0;
      ++total;
    }
  }
  if (total > 0) {
    const auto best = circular_scan(cases, baseline(total, docs.size()), registry_, max_cluster_);
    out.score = best.statistic;
    out.locations = best.cluster;
    std::sort(out.locations.begin(), out.locations.end());
  }
  out.documents = sorted_ids(docs, flagged);
  return out;
}

MetricRow make_metric_row(std::size_t tp, std::size_t fp, std::size_t fn) {
  MetricRow row{tp, fp, fn, 0.0, 0.0, 0.0};
  const bool all_zero = tp == 0 && fp == 0 && fn == 0;
  auto ratio = [all_zero](std::size_t num, std::size_t den) {
    if (den == 0) return all_zero ? 1.0 : 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  row.precision = ratio(tp, tp + fp);
  row.recall = ratio(tp, tp + fn);
  row.overlap = ratio(tp, tp + fp + fn);
  return row;
}

MetricRow spatial_metrics(std::span<const LocationId> detected, std::span<const LocationId> truth) {
  return compare_sets(detected, truth);
}

MetricRow document_metrics(std::span<const std::string> detected, std::span<const std::string> truth) {
  return compare_sets(detected, truth);
}

std::vector<std::string> injected_in_window(const OutbreakGroundTruth& truth, std::size_t outbreak_day,
                                            std::size_t window_days) {
  std::vector<std::string> ids;
  const std::size_t first = outbreak_day >= window_days ? outbreak_day - window_days + 1 : 1;
  for (std::size_t d = first; d <= outbreak_day && d <= truth.injected.size(); ++d) {
    ids.insert(ids.end(), truth.injected[d - 1].begin(), truth.injected[d - 1].end());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

double calibrated_threshold(std::span<const double> null_scores, double fp_per_year) {
  if (null_scores.empty()) throw Error("threshold calibration needs null scores");
  std::vector<double> sorted(null_scores.begin(), null_scores.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto allowed =
      static_cast<std::size_t>(std::floor(fp_per_year * static_cast<double>(sorted.size()) / kDaysPerYear + 1e-9));
  if (allowed >= sorted.size()) return -std::numeric_limits<double>::infinity();
  return sorted[allowed];
}

std::vector<PowerPoint> power_curve(std::span<const double> null_scores,
                                    std::span<const std::vector<double>> outbreak_scores,
                                    std::span<const double> fp_grid) {
  if (static_cast<double>(null_scores.size()) < kDaysPerYear) {
    throw Error("power curves need at least one year of null daily scores (have " +
                std::to_string(null_scores.size()) + ")");
  }
  if (outbreak_scores.empty()) throw Error("power curves need at least one outbreak");
  std::vector<PowerPoint> curve;
  for (double r : fp_grid) {
    PowerPoint pt;
    pt.fp_per_year = r;
    pt.threshold = calibrated_threshold(null_scores, r);
    double detected = 0.0;
    double days = 0.0;
    for (const auto& scores : outbreak_scores) {
      std::size_t first = 0;
      for (std::size_t d = 0; d < scores.size(); ++d) {
        if (scores[d] > pt.threshold) {
          first = d + 1;
          break;
        }
      }
      if (first) {
        detected += 1.0;
        days += static_cast<double>(first);
      } else {
        ++pt.undetected;
        days += static_cast<double>(scores.size());
      }
    }
    const auto n = static_cast<double>(outbreak_scores.size());
    pt.fraction_detected = detected / n;
    pt.days_to_detect = days / n;
    curve.push_back(pt);
  }
  return curve;
}

std::vector<OutbreakDayResult> evaluate_outbreak(const Detector& detector, Method method,
                                                 const OutbreakGroundTruth& truth) {
  std::vector<OutbreakDayResult> rows;
  for (std::size_t d = 1; d <= truth.duration; ++d) {
    const Day day = truth.start_day + static_cast<Day>(d - 1);
    if (day < detector.first_detectable_day()) continue;
    OutbreakDayResult r;
    r.outbreak_day = d;
    r.output = detector.detect(method, day);
    r.spatial = spatial_metrics(r.output.locations, truth.affected);
    const auto injected = injected_in_window(truth, d, detector.config().window_days);
    r.document = document_metrics(r.output.documents, injected);
    rows.push_back(std::move(r));
  }
  return rows;
}

Corpus remove_injected(const Corpus& corpus, const OutbreakGroundTruth& truth) {
  std::set<std::string> injected;
  for (const auto& day : truth.injected) injected.insert(day.begin(), day.end());
  Corpus out;
  out.vocabulary = corpus.vocabulary;
  out.background = corpus.background;
  for (const auto& d : corpus.foreground) {
    if (!injected.count(d.id)) out.foreground.push_back(d);
  }
  return out;
}

std::vector<MethodEvaluation> evaluate_benchmark(std::span<const Scenario> scenarios,
                                                 const LocationRegistry& registry, std::span<const Method> methods,
                                                 const DetectionConfig& config, std::span<const double> fp_grid) {
  struct PerScenario {
    std::vector<std::vector<OutbreakDayResult>> rows;  // per method
    std::vector<std::vector<double>> null_scores;      // per method
  };
  std::vector<PerScenario> results(scenarios.size());
  DetectionConfig inner = config;
  inner.threads = 1;
  parallel_for(scenarios.size(), config.threads, [&](std::size_t s) {
    const auto& scenario = scenarios[s];
    const Detector outbreak(scenario.corpus, registry, inner);
    const Corpus null_corpus = remove_injected(scenario.corpus, scenario.truth);
    std::optional<TopicModel> background;
    const bool needs_topics = std::any_of(methods.begin(), methods.end(), [](Method m) { return m != Method::kNaiveBayes; });
    if (needs_topics && inner.scan.num_background_topics > 0) background = outbreak.background_model();
    const Detector null_run(null_corpus, registry, inner, std::move(background));
    Day last = null_run.first_detectable_day();
    for (const auto& d : null_corpus.foreground) last = std::max(last, d.day);
    auto& out = results[s];
    for (Method m : methods) {
      out.rows.push_back(evaluate_outbreak(outbreak, m, scenario.truth));
      std::vector<double> scores;
      for (const auto& o : null_run.run_windows(m, null_run.first_detectable_day(), last)) scores.push_back(o.score);
      out.null_scores.push_back(std::move(scores));
    }
  });

  std::vector<MethodEvaluation> evals;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    MethodEvaluation e;
    e.method = methods[mi];
    for (auto& r : results) {
      std::vector<double> scores;
      for (const auto& row : r.rows[mi]) scores.push_back(row.output.score);
      e.outbreak_scores.push_back(std::move(scores));
      e.null_scores.insert(e.null_scores.end(), r.null_scores[mi].begin(), r.null_scores[mi].end());
      e.scenarios.push_back(std::move(r.rows[mi]));
    }
    try {
      e.curve = power_curve(e.null_scores, e.outbreak_scores, fp_grid);
    } catch (const Error& err) {
      e.curve_error = err.what();
    }
    evals.push_back(std::move(e));
  }
  return evals;
}

void write_detections_csv(std::ostream& out, Method method, std::span<const DetectionOutput> outputs,
                          const LocationRegistry& registry) {
  out << "date,method,score,num_locations,locations,num_documents,documents\n" << std::setprecision(12);
  for (const auto& o : outputs) {
    out << format_date(o.day) << ',' << to_string(method) << ',' << o.score << ',' << o.locations.size() << ',';
    for (std::size_t i = 0; i < o.locations.size(); ++i) out << (i ? ";" : "") << registry.at(o.locations[i]).zipcode;
    out << ',' << o.documents.size() << ',';
    for (std::size_t i = 0; i < o.documents.size(); ++i) out << (i ? ";" : "") << o.documents[i];
    out << '\n';
  }
}

void write_metrics_header(std::ostream& out) { out << "day,method,sp_prec,sp_rec,sp_ovl,doc_prec,doc_rec,doc_ovl\n"; }

std::vector<OutbreakDayResult> mean_by_day(std::span<const std::vector<OutbreakDayResult>> scenarios) {
  if (scenarios.empty()) return {};
  std::vector<OutbreakDayResult> mean(scenarios.front().size());
  for (std::size_t i = 0; i < mean.size(); ++i) mean[i].outbreak_day = scenarios.front()[i].outbreak_day;
  auto add = [](MetricRow& acc, const MetricRow& r) {
    acc.tp += r.tp;
    acc.fp += r.fp;
    acc.fn += r.fn;
    acc.precision += r.precision;
    acc.recall += r.recall;
    acc.overlap += r.overlap;
  };
  for (const auto& rows : scenarios) {
    if (rows.size() != mean.size()) throw Error("mean_by_day: scenarios cover different numbers of days");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].outbreak_day != mean[i].outbreak_day) throw Error("mean_by_day: outbreak days do not line up");
      add(mean[i].spatial, rows[i].spatial);
      add(mean[i].document, rows[i].document);
    }
  }
  const double n = static_cast<double>(scenarios.size());
  for (auto& r : mean) {
    for (MetricRow* m : {&r.spatial, &r.document}) {
      m->precision /= n;
      m->recall /= n;
      m->overlap /= n;
    }
  }
  return mean;
}

void write_metrics_rows(std::ostream& out, Method method, std::span<const OutbreakDayResult> rows) {
  out << std::setprecision(10);
  for (const auto& r : rows) {
    out << r.outbreak_day << ',' << to_string(method) << ',' << r.spatial.precision << ',' << r.spatial.recall << ','
        << r.spatial.overlap << ',' << r.document.precision << ',' << r.document.recall << ',' << r.document.overlap
        << '\n';
  }
}

void write_power_header(std::ostream& out) { out << "fp_per_year,method,frac_detected,days_to_detect\n"; }

void write_power_rows(std::ostream& out, Method method, std::span<const PowerPoint> points) {
  out << std::setprecision(10);
  for (const auto& p : points) {
    out << p.fp_per_year << ',' << to_string(method) << ',' << p.fraction_detected << ',' << p.days_to_detect << '\n';
  }
}

}  // namespace scss
