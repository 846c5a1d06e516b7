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

#include "scss/outbreak.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace scss {

namespace {

std::string topic_label(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "topic-%02zu", k);
  return buf;
}

std::string padded(const char* prefix, std::size_t i) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s-%06zu", prefix, i);
  return buf;
}

std::string word_name(std::size_t w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "w%04zu", w);
  return buf;
}

std::size_t sample_cdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

void GeneratorConfig::validate() const {
  if (num_topics == 0 || vocab_size == 0) throw Error("generator needs at least one topic and one word");
  if (background_end <= background_begin) throw Error("generator background day range is empty");
  if (foreground_end > foreground_begin && foreground_begin < background_end) {
    throw Error("foreground days must follow the background days");
  }
  if (!(docs_per_day > 0.0) || !(mean_doc_length >= 1.0)) throw Error("generator rates must be positive");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error("generator Dirichlet parameters must be positive");
  if (!(eta.first > 0.0) || !(eta.second > 0.0)) throw Error("eta components must be positive");
}

GeneratedCorpus generate_background(const GeneratorConfig& config, const LocationRegistry& registry) {
  config.validate();
  if (registry.size() == 0) throw Error("generator needs at least one location");
  Rng rng(config.seed);
  const std::size_t T = config.num_topics;
  const std::size_t V = config.vocab_size;

  GeneratedCorpus out;
  auto& corpus = out.corpus;
  for (std::size_t w = 0; w < V; ++w) corpus.vocabulary.add(word_name(w));

  auto& truth = out.truth;
  truth.num_background_topics = T;
  truth.vocab_size = V;
  truth.vocab_hash = corpus.vocabulary.hash();
  truth.hyper = Hyperparameters::symmetric(T, config.alpha, config.beta, config.beta);
  truth.phi.reserve(T * V);
  std::vector<std::vector<double>> cdf(T);
  for (std::size_t k = 0; k < T; ++k) {
    const auto row = rng.symmetric_dirichlet(V, config.beta);
    truth.phi.insert(truth.phi.end(), row.begin(), row.end());
    cdf[k].resize(V);
    double acc = 0.0;
    for (std::size_t w = 0; w < V; ++w) cdf[k][w] = acc += row[w];
  }

  auto generate = [&](Day begin, Day end, const char* prefix, std::vector<Document>& docs) {
    if (end <= begin) return;
    const auto days = static_cast<std::size_t>(end - begin);
    const auto count = static_cast<std::size_t>(std::llround(config.docs_per_day * static_cast<double>(days)));
    std::vector<double> theta_cdf(T);
    std::vector<std::size_t> topic_counts(T);
    for (std::size_t i = 0; i < count; ++i) {
      Document doc;
      doc.id = padded(prefix, i);
      doc.day = begin + static_cast<Day>(rng.index(days));
      doc.location = static_cast<LocationId>(rng.index(registry.size()));
      const auto theta = rng.symmetric_dirichlet(T, config.alpha);
      double acc = 0.0;
      for (std::size_t k = 0; k < T; ++k) theta_cdf[k] = acc += theta[k];
      const std::size_t length = 1 + rng.poisson(config.mean_doc_length - 1.0);
      std::fill(topic_counts.begin(), topic_counts.end(), 0);
      for (std::size_t j = 0; j < length; ++j) {
        const std::size_t z = sample_cdf(theta_cdf, rng);
        ++topic_counts[z];
        doc.tokens.push_back(static_cast<WordId>(sample_cdf(cdf[z], rng)));
      }
      const auto dominant = std::max_element(topic_counts.begin(), topic_counts.end()) - topic_counts.begin();
      doc.label = topic_label(static_cast<std::size_t>(dominant));
      docs.push_back(std::move(doc));
    }
    std::stable_sort(docs.begin(), docs.end(), [](const Document& a, const Document& b) { return a.day < b.day; });
  };
  generate(config.background_begin, config.background_end, "bg", corpus.background);
  generate(config.foreground_begin, config.foreground_end, "fg", corpus.foreground);
  return out;
}

LocationRegistry synthetic_registry(std::size_t count, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x2e9));
  std::vector<Location> locs;
  locs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Location loc;
    loc.zipcode = std::to_string(15001 + i);
    loc.latitude = 40.2 + 0.5 * rng.uniform();
    loc.longitude = -80.3 + 0.6 * rng.uniform();
    locs.push_back(std::move(loc));
  }
  return LocationRegistry(std::move(locs));
}

std::size_t OutbreakGroundTruth::total_injected() const noexcept {
  std::size_t n = 0;
  for (const auto& day : injected) n += day.size();
  return n;
}

InjectionResult inject_outbreak(Corpus corpus, std::span<const Document> pool, const LocationRegistry& registry,
                                const OutbreakParams& params, Rng& rng) {
  InjectionResult result;
  auto& truth = result.truth;
  truth.duration = params.duration;
  if (params.duration == 0) {
    result.corpus = std::move(corpus);
    return result;
  }
  if (pool.empty()) throw Error("outbreak injection: held-out document pool is empty");
  if (corpus.foreground.empty()) throw Error("outbreak injection: foreground is empty");
  if (registry.size() == 0) throw Error("outbreak injection: empty registry");

  Day first = corpus.foreground.front().day;
  Day last = first;
  for (const auto& d : corpus.foreground) {
    first = std::min(first, d.day);
    last = std::max(last, d.day);
  }
  if (params.start_day) {
    truth.start_day = *params.start_day;
  } else {
    const Day lo = first + static_cast<Day>(params.lead_days);
    const Day hi = last - static_cast<Day>(params.duration) + 1;
    if (hi < lo) throw Error("outbreak injection: foreground too short for the outbreak window");
    truth.start_day = static_cast<Day>(rng.integer(lo, hi));
  }

  const std::size_t max_size = std::min(params.max_size, registry.size());
  const std::size_t min_size = std::clamp<std::size_t>(params.min_size, 1, max_size);
  if (params.sparsities.empty()) throw Error("outbreak injection: no sparsity values");
  truth.center = static_cast<LocationId>(rng.index(registry.size()));
  truth.size = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(min_size),
                                                    static_cast<std::int64_t>(max_size)));
  truth.neighborhood = registry.neighborhood(truth.center, truth.size);
  truth.p = params.sparsities[rng.index(params.sparsities.size())];
  if (!(truth.p > 0.0 && truth.p <= 1.0)) throw Error("outbreak injection: sparsity outside (0, 1]");
  // An empty affected set carries no outbreak; redraw until nonempty.
  while (truth.affected.empty()) {
    for (LocationId loc : truth.neighborhood) {
      if (rng.bernoulli(truth.p)) truth.affected.push_back(loc);
    }
  }
  std::sort(truth.affected.begin(), truth.affected.end());
  if (params.mode == InjectionMode::kGenerative) {
    for (std::size_t i = 0; i < truth.affected.size(); ++i) {
      truth.severity.push_back(rng.beta(params.eta.first, params.eta.second));
    }
  }

  truth.injected.resize(params.duration);
  for (std::size_t d = 1; d <= params.duration; ++d) {
    const std::size_t cases = params.cases_per_day_slope * d;
    for (std::size_t j = 0; j < cases; ++j) {
      const Document& src = pool[rng.index(pool.size())];
      const std::size_t slot = rng.index(truth.affected.size());
      if (params.mode == InjectionMode::kGenerative && !rng.bernoulli(truth.severity[slot])) continue;
      Document doc;
      doc.id = params.id_prefix + "-d" + std::to_string(d) + "-" + std::to_string(j);
      doc.tokens = src.tokens;
      doc.day = truth.start_day + static_cast<Day>(d - 1);
      doc.location = truth.affected[slot];
      doc.label = src.label;
      truth.injected[d - 1].push_back(doc.id);
      corpus.foreground.push_back(std::move(doc));
    }
  }
  result.corpus = std::move(corpus);
  return result;
}

std::vector<std::string> top_labels(const Corpus& corpus, std::size_t k) {
  std::map<std::string, std::size_t> freq;
  for (const auto* part : {&corpus.background, &corpus.foreground}) {
    for (const auto& d : *part) {
      if (!d.label.empty()) ++freq[d.label];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (k > ranked.size()) throw Error("corpus has only " + std::to_string(ranked.size()) + " labels");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].first);
  return out;
}

std::vector<Document> strip_label(Corpus& corpus, const std::string& label) {
  std::vector<Document> removed;
  for (auto* part : {&corpus.background, &corpus.foreground}) {
    std::vector<Document> kept;
    kept.reserve(part->size());
    for (auto& d : *part) (d.label == label ? removed : kept).push_back(std::move(d));
    *part = std::move(kept);
  }
  return removed;
}

std::vector<Scenario> make_benchmark(const Corpus& labeled, const LocationRegistry& registry,
                                     std::span<const std::string> labels, std::size_t outbreaks_per_label,
                                     const OutbreakParams& params, std::uint64_t seed) {
  std::vector<Scenario> scenarios;
  scenarios.reserve(labels.size() * outbreaks_per_label);
  for (std::size_t li = 0; li < labels.size(); ++li) {
    Corpus stripped = labeled;
    const auto pool = strip_label(stripped, labels[li]);
    if (pool.empty()) throw Error("label '" + labels[li] + "' has no documents");
    for (std::size_t k = 0; k < outbreaks_per_label; ++k) {
      const std::uint64_t scenario_seed = derive_seed(seed, li, k);
      Rng rng(scenario_seed);
      OutbreakParams p = params;
      p.id_prefix = "inj-" + labels[li] + "-" + std::to_string(k);
      auto injected = inject_outbreak(stripped, pool, registry, p, rng);
      injected.truth.label = labels[li];
      injected.truth.seed = scenario_seed;
      scenarios.push_back({std::move(injected.corpus), std::move(injected.truth)});
    }
  }
  return scenarios;
}

std::string ground_truth_json(const OutbreakGroundTruth& truth, const LocationRegistry& registry) {
  nlohmann::ordered_json j;
  auto zips = [&registry](const std::vector<LocationId>& ids) {
    std::vector<std::string> out;
    for (auto id : ids) out.push_back(registry.at(id).zipcode);
    return out;
  };
  j["label"] = truth.label;
  j["center"] = truth.duration ? registry.at(truth.center).zipcode : "";
  j["size"] = truth.size;
  j["neighborhood"] = zips(truth.neighborhood);
  j["p"] = truth.p;
  j["affected"] = zips(truth.affected);
  j["severity"] = truth.severity;
  j["start_date"] = format_date(truth.start_day);
  j["duration"] = truth.duration;
  j["injected"] = truth.injected;
  j["seed"] = truth.seed;
  return j.dump(2) + "\n";
}

OutbreakGroundTruth parse_ground_truth(const std::string& text, const LocationRegistry& registry) {
  const auto j = nlohmann::json::parse(text);
  auto ids = [&registry](const nlohmann::json& arr) {
    std::vector<LocationId> out;
    for (const auto& z : arr) {
      const auto id = registry.find(z.get<std::string>());
      if (!id) throw Error("ground truth references unknown location '" + z.get<std::string>() + "'");
      out.push_back(*id);
    }
    return out;
  };
  OutbreakGroundTruth t;
  t.label = j.at("label").get<std::string>();
  t.size = j.at("size").get<std::size_t>();
  t.duration = j.at("duration").get<std::size_t>();
  if (t.duration) {
    const auto c = registry.find(j.at("center").get<std::string>());
    if (!c) throw Error("ground truth center is not registered");
    t.center = *c;
  }
  t.neighborhood = ids(j.at("neighborhood"));
  t.p = j.at("p").get<double>();
  t.affected = ids(j.at("affected"));
  t.severity = j.at("severity").get<std::vector<double>>();
  t.start_day = parse_date(j.at("start_date").get<std::string>());
  t.injected = j.at("injected").get<std::vector<std::vector<std::string>>>();
  t.seed = j.at("seed").get<std::uint64_t>();
  return t;
}

void write_scenario(const std::filesystem::path& dir, const Scenario& scenario, const LocationRegistry& registry,
                    Day split_day, const std::string& manifest_json) {
  std::filesystem::create_directories(dir);
  std::ostringstream corpus;
  const auto records = to_records(scenario.corpus, registry);
  write_records_jsonl(corpus, records);
  write_text(dir / "corpus.jsonl", corpus.str());
  write_text(dir / "ground_truth.json", ground_truth_json(scenario.truth, registry));
  auto manifest = nlohmann::ordered_json::parse(manifest_json);
  manifest["split_date"] = format_date(split_day);
  manifest["scenario_seed"] = scenario.truth.seed;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

Scenario read_scenario(const std::filesystem::path& dir, const LocationRegistry& registry) {
  const auto manifest = nlohmann::json::parse(read_text(dir / "manifest.json"));
  const Day split = parse_date(manifest.at("split_date").get<std::string>());
  const auto records = read_records_jsonl_file((dir / "corpus.jsonl").string());
  auto ingested = ingest(records, registry, split);
  if (!ingested.rejected.empty()) throw Error("scenario corpus: " + ingested.rejected.front());
  return {std::move(ingested.corpus), parse_ground_truth(read_text(dir / "ground_truth.json"), registry)};
}

}  // namespace scss
