// Copyright 2026 The sumrank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sumrank/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include <json.hpp>

#include "sumrank/importance.hpp"
#include "sumrank/rerank_features.hpp"
#include "sumrank/reranker.hpp"

namespace sumrank {

namespace {

LengthUnit unit_from_string(const std::string& text) {
  if (text == "words") return LengthUnit::kWords;
  if (text == "bytes") return LengthUnit::kBytes;
  throw DataError("unknown length unit '" + text + "' (expected words or bytes)");
}

std::string unit_to_string(LengthUnit unit) {
  return unit == LengthUnit::kWords ? "words" : "bytes";
}

bool kl_direction_from_string(const std::string& text) {
  if (text == "summary") return true;
  if (text == "document") return false;
  throw DataError("unknown kl direction '" + text +
                  "' (expected summary or document)");
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("config file " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) {
    throw DataError("config file " + path.string() + ": expected a JSON object");
  }
  RunConfig config;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "budget") {
        config.budget = value.get<int>();
      } else if (key == "unit") {
        config.unit = unit_from_string(value.get<std::string>());
      } else if (key == "lambdas") {
        config.lambdas = value.get<std::vector<double>>();
      } else if (key == "per_lambda") {
        config.per_lambda = value.get<int>();
      } else if (key == "beta") {
        config.beta = value.get<double>();
      } else if (key == "timeout_ms") {
        config.timeout_ms = value.get<long long>();
      } else if (key == "embeddings") {
        config.embeddings = value.get<std::string>();
      } else if (key == "mask") {
        config.mask = value.get<std::string>();
      } else if (key == "kl_direction") {
        config.kl_from_summary = kl_direction_from_string(value.get<std::string>());
      } else if (key == "svr_c") {
        config.svr_c = value.get<double>();
      } else if (key == "svr_epsilon") {
        config.svr_epsilon = value.get<double>();
      } else if (key == "svr_epochs") {
        config.svr_epochs = value.get<int>();
      } else if (key == "seed_svr") {
        config.seed_svr = value.get<unsigned long long>();
      } else if (key == "ranker_c") {
        config.ranker_c = value.get<double>();
      } else if (key == "ranker_epochs") {
        config.ranker_epochs = value.get<int>();
      } else if (key == "seed_ranker") {
        config.seed_ranker = value.get<unsigned long long>();
      } else if (key == "jobs") {
        config.jobs = value.get<int>();
      } else if (key == "out") {
        config.out = value.get<std::string>();
      } else {
        throw DataError("config file " + path.string() + ": unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("config file " + path.string() + ": " + e.what());
  }
  validate_config(config);
  return config;
}

void validate_config(const RunConfig& config) {
  if (config.budget <= 0) throw DataError("budget must be positive");
  if (config.beta < 0.0 || config.beta > 1.0) throw DataError("beta must lie in [0,1]");
  for (double lambda : config.lambdas) {
    if (lambda < 0.0 || lambda > 1.0) throw DataError("lambdas must lie in [0,1]");
  }
  if (config.per_lambda < 1) throw DataError("per_lambda must be at least 1");
  if (config.svr_c <= 0.0 || config.ranker_c <= 0.0) {
    throw DataError("regularization constants must be positive");
  }
  if (config.svr_epsilon < 0.0) throw DataError("svr_epsilon must be nonnegative");
  if (config.svr_epochs < 1 || config.ranker_epochs < 1) {
    throw DataError("epoch counts must be at least 1");
  }
  if (config.jobs < 1) throw DataError("jobs must be at least 1");
  if (config.out.empty()) throw DataError("output directory must not be empty");
  feature_mask_for(config.mask);  // validates the name
}

const std::vector<std::string> kMaskNames = {
    "all", "no-word", "no-sentence", "no-summary", "no-embedding"};

std::vector<bool> feature_mask_for(const std::string& mask) {
  std::vector<bool> keep(kRerankFeatureDim, true);
  if (mask == "all") return keep;
  if (mask == "no-word") {
    std::fill(keep.begin(), keep.begin() + kWordBlockDim, false);
    return keep;
  }
  if (mask == "no-sentence") {
    std::fill(keep.begin() + kWordBlockDim,
              keep.begin() + kWordBlockDim + kSentenceBlockDim, false);
    return keep;
  }
  if (mask == "no-summary") {
    std::fill(keep.begin() + kWordBlockDim + kSentenceBlockDim, keep.end(), false);
    return keep;
  }
  if (mask == "no-embedding") {
    keep[20] = false;  // document embedding cosine
    keep[22] = false;  // pool embedding cosine
    return keep;
  }
  throw DataError("unknown feature mask '" + mask +
                  "' (expected all, no-word, no-sentence, no-summary or no-embedding)");
}

void save_selections(const std::vector<SelectionRow>& selections,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open selections file for writing: " + path.string());
  for (const SelectionRow& row : selections) {
    nlohmann::json j;
    j["set_id"] = row.set_id;
    j["system_id"] = row.system_id;
    j["sentence_ids"] = row.sentence_ids;
    j["text"] = row.text;
    j["score"] = row.score;
    out << j.dump() << '\n';
  }
}

std::vector<SelectionRow> load_selections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open selections file: " + path.string());
  std::vector<SelectionRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      SelectionRow row;
      row.set_id = j.at("set_id").get<std::string>();
      row.system_id = j.value("system_id", std::string{});
      row.sentence_ids = j.at("sentence_ids").get<std::vector<int>>();
      row.text = j.at("text").get<std::string>();
      row.score = j.at("score").get<double>();
      rows.push_back(std::move(row));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("selections file " + path.string() + " line " +
                      std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

namespace {

// Runs fn(0..n-1) on up to `jobs` workers; rethrows the first failure.
template <typename Fn>
void parallel_for(int jobs, std::size_t n, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> workers;
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  workers.reserve(count);
  for (std::size_t k = 0; k < count; ++k) workers.emplace_back(worker);
  for (std::thread& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<Cluster> parse_nonempty_corpus(const std::filesystem::path& path) {
  std::vector<Cluster> clusters = parse_corpus(path);
  if (clusters.empty()) {
    throw DataError("corpus " + path.string() + " holds no clusters");
  }
  return clusters;
}

GenerationOptions generation_options(const RunConfig& config) {
  GenerationOptions gen;
  gen.budget = config.budget;
  gen.unit = config.unit;
  gen.beta = config.beta;
  gen.per_lambda = config.per_lambda;
  gen.lambdas = config.lambdas;
  gen.timeout_ms = config.timeout_ms;
  return gen;
}

const EmbeddingTable* load_optional_embeddings(const RunConfig& config,
                                               std::optional<EmbeddingTable>& storage) {
  if (config.embeddings.empty()) return nullptr;
  storage = load_embeddings(config.embeddings);
  return &*storage;
}

void write_manifest(const RunConfig& config, const std::filesystem::path& path) {
  nlohmann::json j;
  j["schema_id"] = "run-manifest/v1";
  nlohmann::json& c = j["config"];
  c["budget"] = config.budget;
  c["unit"] = unit_to_string(config.unit);
  c["lambdas"] = config.lambdas.empty() ? default_lambdas() : config.lambdas;
  c["per_lambda"] = config.per_lambda;
  c["beta"] = config.beta;
  c["timeout_ms"] = config.timeout_ms;
  c["embeddings"] = config.embeddings;
  c["mask"] = config.mask;
  c["kl_direction"] = config.kl_from_summary ? "summary" : "document";
  c["svr_c"] = config.svr_c;
  c["svr_epsilon"] = config.svr_epsilon;
  c["svr_epochs"] = config.svr_epochs;
  c["seed_svr"] = config.seed_svr;
  c["ranker_c"] = config.ranker_c;
  c["ranker_epochs"] = config.ranker_epochs;
  c["seed_ranker"] = config.seed_ranker;
  c["jobs"] = config.jobs;
  c["out"] = config.out;
  std::ofstream out(path);
  if (!out) throw DataError("cannot open manifest for writing: " + path.string());
  out << j.dump(2) << '\n';
}

SvrOptions svr_options(const RunConfig& config) {
  SvrOptions options;
  options.c = config.svr_c;
  options.epsilon = config.svr_epsilon;
  options.epochs = config.svr_epochs;
  options.seed = config.seed_svr;
  return options;
}

RankerOptions ranker_options(const RunConfig& config, FeatureScaler scaler) {
  RankerOptions options;
  options.c = config.ranker_c;
  options.epochs = config.ranker_epochs;
  options.seed = config.seed_ranker;
  options.feature_mask = feature_mask_for(config.mask);
  options.scaler = std::move(scaler);
  return options;
}

LinearModel load_checked_model(const std::filesystem::path& path,
                               const std::string& schema) {
  LinearModel model = load_model(path);
  if (model.schema_id != schema) {
    throw DataError("model " + path.string() + " carries schema '" +
                    model.schema_id + "', expected '" + schema + "'");
  }
  return model;
}

RankerModel load_checked_ranker(const std::filesystem::path& path) {
  RankerModel ranker = load_ranker(path);
  if (ranker.schema_id != kRerankFeatureSchema) {
    throw DataError("ranker " + path.string() + " carries schema '" +
                    ranker.schema_id + "', expected '" + kRerankFeatureSchema + "'");
  }
  if (ranker.weights.size() != kRerankFeatureDim) {
    throw DataError("ranker " + path.string() + " has dimension " +
                    std::to_string(ranker.weights.size()) + ", expected " +
                    std::to_string(kRerankFeatureDim));
  }
  return ranker;
}

DataError with_set_context(const std::string& set_id, const DataError& e) {
  return DataError("set " + set_id + ": " + e.what());
}

}  // namespace

void run_train(const std::filesystem::path& corpus_path, const RunConfig& config) {
  validate_config(config);
  const std::vector<Cluster> clusters = parse_nonempty_corpus(corpus_path);
  for (const Cluster& cluster : clusters) {
    if (!cluster.references.has_value()) {
      throw DataError("training cluster " + cluster.documents.set_id +
                      " lacks reference summaries");
    }
  }

  std::vector<RegressionInstance> word_data;
  std::vector<RegressionInstance> sentence_data;
  for (const Cluster& cluster : clusters) {
    const DocumentSet& ds = cluster.documents;
    const ReferenceSet& refs = *cluster.references;
    for (const auto& [word, stats] : ds.vocabulary) {
      word_data.push_back({word_features(stats, ds), word_target(stats, refs)});
    }
    for (const Sentence& s : ds.sentences) {
      sentence_data.push_back({sentence_features(s, ds), sentence_target(s, refs)});
    }
  }
  const SvrOptions svr = svr_options(config);
  const LinearModel word_model = train_svr(word_data, svr, kWordFeatureSchema);
  const LinearModel sentence_model = train_svr(sentence_data, svr, kSentenceFeatureSchema);

  std::optional<EmbeddingTable> emb_storage;
  const EmbeddingTable* emb = load_optional_embeddings(config, emb_storage);
  const GenerationOptions gen = generation_options(config);

  struct SetResult {
    std::vector<CandidateSummary> pool;
    std::vector<SummaryFeatures> features;
    std::vector<double> labels;
  };
  std::vector<SetResult> results(clusters.size());
  parallel_for(config.jobs, clusters.size(), [&](std::size_t i) {
    const DocumentSet& ds = clusters[i].documents;
    try {
      SetResult r;
      r.pool = generate_candidates(ds, sentence_model, word_model, gen);
      r.features = extract_pool_features(r.pool, ds, emb);
      r.labels.reserve(r.pool.size());
      for (const CandidateSummary& c : r.pool) {
        r.labels.push_back(candidate_rouge2(c, ds, *clusters[i].references));
      }
      results[i] = std::move(r);
    } catch (const DataError& e) {
      throw with_set_context(ds.set_id, e);
    }
  });

  std::vector<FeatureRecord> records;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const SetResult& r = results[i];
    for (std::size_t k = 0; k < r.pool.size(); ++k) {
      FeatureRecord rec;
      rec.set_id = r.pool[k].set_id;
      rec.lambda = r.pool[k].lambda;
      rec.iteration = r.pool[k].iteration;
      rec.source = r.pool[k].source;
      rec.label = r.labels[k];
      rec.features = r.features[k];
      records.push_back(std::move(rec));
    }
  }
  if (records.empty()) {
    throw DataError("no candidate could be generated from the training corpus");
  }

  const ArtifactPaths paths{config.out};
  std::filesystem::create_directories(paths.root);
  save_features_csv(records, paths.train_features());

  std::vector<SummaryFeatures> all_raw;
  all_raw.reserve(records.size());
  for (const FeatureRecord& rec : records) all_raw.push_back(rec.features);
  const FeatureScaler scaler = fit_scaler(all_raw);

  std::map<std::string, std::vector<std::pair<SummaryFeatures, double>>> pool_by_set;
  for (const FeatureRecord& rec : records) {
    pool_by_set[rec.set_id].push_back({apply_scaler(scaler, rec.features), rec.label});
  }
  const std::vector<RankingPair> pairs = build_pairs(pool_by_set);
  const RankerModel ranker = train_ranksvm(pairs, ranker_options(config, scaler));

  save_model(word_model, paths.word_model());
  save_model(sentence_model, paths.sentence_model());
  save_ranker(ranker, paths.ranker());
  write_manifest(config, paths.manifest());
}

void run_summarize(const std::filesystem::path& corpus_path, const RunConfig& config) {
  validate_config(config);
  const std::vector<Cluster> clusters = parse_nonempty_corpus(corpus_path);
  const ArtifactPaths paths{config.out};
  const LinearModel word_model =
      load_checked_model(paths.word_model(), kWordFeatureSchema);
  const LinearModel sentence_model =
      load_checked_model(paths.sentence_model(), kSentenceFeatureSchema);
  const RankerModel ranker = load_checked_ranker(paths.ranker());

  std::optional<EmbeddingTable> emb_storage;
  const EmbeddingTable* emb = load_optional_embeddings(config, emb_storage);
  const GenerationOptions gen = generation_options(config);

  struct SetResult {
    std::vector<CandidateSummary> pool;
    SelectionRow selection;
    std::string warning;
  };
  std::vector<SetResult> results(clusters.size());
  parallel_for(config.jobs, clusters.size(), [&](std::size_t i) {
    const DocumentSet& ds = clusters[i].documents;
    try {
      SetResult r;
      r.selection.set_id = ds.set_id;
      r.pool = generate_candidates(ds, sentence_model, word_model, gen);
      if (r.pool.empty()) {
        r.warning = "warning: set " + ds.set_id +
                    " admits no candidate within the budget; summary is empty";
      } else {
        const std::vector<SummaryFeatures> features =
            extract_pool_features(r.pool, ds, emb);
        std::vector<double> scores(r.pool.size());
        for (std::size_t k = 0; k < r.pool.size(); ++k) {
          scores[k] = score(ranker, features[k]);
        }
        const std::size_t best = select_best_index(r.pool, scores);
        r.selection.sentence_ids = r.pool[best].sentence_ids;
        r.selection.text = r.pool[best].text;
        r.selection.score = scores[best];
      }
      results[i] = std::move(r);
    } catch (const DataError& e) {
      throw with_set_context(ds.set_id, e);
    }
  });

  std::filesystem::create_directories(paths.summaries_dir());
  std::vector<CandidateSummary> pool;
  std::vector<SelectionRow> selections;
  for (const SetResult& r : results) {
    if (!r.warning.empty()) std::cerr << r.warning << '\n';
    pool.insert(pool.end(), r.pool.begin(), r.pool.end());
    selections.push_back(r.selection);
    std::ofstream summary(paths.summaries_dir() / (r.selection.set_id + ".txt"));
    if (!summary) {
      throw DataError("cannot write summary file for set " + r.selection.set_id);
    }
    if (!r.selection.text.empty()) summary << r.selection.text << '\n';
  }
  save_pool(pool, paths.pool());
  save_selections(selections, paths.selections());
}

EvaluationReport run_evaluate(const std::filesystem::path& corpus_path,
                              const std::filesystem::path& pool_path,
                              const std::filesystem::path& selections_path,
                              const RunConfig& config) {
  validate_config(config);
  const std::vector<Cluster> clusters = parse_nonempty_corpus(corpus_path);
  const std::vector<CandidateSummary> pool = load_pool(pool_path);
  const ScoreMatrix matrix = build_score_matrix(pool, clusters);

  std::map<std::string, double> selection_scores;
  if (!selections_path.empty()) {
    std::map<std::string, const Cluster*> by_id;
    for (const Cluster& cluster : clusters) {
      by_id.emplace(cluster.documents.set_id, &cluster);
    }
    for (const SelectionRow& row : load_selections(selections_path)) {
      auto it = by_id.find(row.set_id);
      if (it == by_id.end()) {
        throw DataError("selection references unknown set " + row.set_id);
      }
      if (!selection_scores.emplace(row.set_id, 0.0).second) {
        throw DataError("duplicate selection for set " + row.set_id);
      }
      if (row.sentence_ids.empty() && row.text.empty()) continue;  // stays 0
      const Cluster& cluster = *it->second;
      if (!cluster.references.has_value()) {
        throw DataError("set " + row.set_id + " has no reference summaries");
      }
      CandidateSummary c;
      c.set_id = row.set_id;
      if (!row.sentence_ids.empty()) {
        c.source = CandidateSource::kIlp;
        c.sentence_ids = row.sentence_ids;
      } else {
        c.source = CandidateSource::kExternal;
        c.system_id = row.system_id;
      }
      c.text = row.text;
      selection_scores[row.set_id] =
          candidate_rouge2(c, cluster.documents, *cluster.references);
    }
  }

  const EvaluationReport report = build_report(matrix, selection_scores);
  const ArtifactPaths paths{config.out};
  std::filesystem::create_directories(paths.root);
  save_report(report, paths.report());
  return report;
}

EvaluationReport run_rerank_external(const std::filesystem::path& corpus_path,
                                     const std::filesystem::path& candidates_path,
                                     const RunConfig& config) {
  validate_config(config);
  const std::vector<Cluster> clusters = parse_nonempty_corpus(corpus_path);
  std::set<std::string> known_ids;
  std::map<std::string, const Cluster*> by_id;
  for (const Cluster& cluster : clusters) {
    known_ids.insert(cluster.documents.set_id);
    by_id.emplace(cluster.documents.set_id, &cluster);
  }
  const std::vector<CandidateSummary> external =
      load_external_candidates(candidates_path, known_ids);
  if (external.empty()) {
    throw DataError("external candidate file " + candidates_path.string() +
                    " is empty");
  }

  const ArtifactPaths paths{config.out};
  const RankerModel ranker = load_checked_ranker(paths.ranker());
  std::optional<EmbeddingTable> emb_storage;
  const EmbeddingTable* emb = load_optional_embeddings(config, emb_storage);

  std::map<std::string, std::vector<CandidateSummary>> by_set;
  for (const CandidateSummary& c : external) by_set[c.set_id].push_back(c);
  for (const std::string& id : known_ids) {
    if (by_set.find(id) == by_set.end()) {
      std::cerr << "warning: no external candidates for set " << id << '\n';
    }
  }

  std::vector<SelectionRow> selections;
  std::map<std::string, double> selection_scores;
  for (const auto& [set_id, pool] : by_set) {
    const Cluster& cluster = *by_id.at(set_id);
    try {
      const std::vector<SummaryFeatures> features =
          extract_pool_features(pool, cluster.documents, emb);
      std::vector<double> scores(pool.size());
      for (std::size_t k = 0; k < pool.size(); ++k) {
        scores[k] = score(ranker, features[k]);
      }
      const std::size_t best = select_best_index(pool, scores);
      SelectionRow row;
      row.set_id = set_id;
      row.system_id = pool[best].system_id;
      row.text = pool[best].text;
      row.score = scores[best];
      selections.push_back(row);
      if (cluster.references.has_value()) {
        selection_scores[set_id] = candidate_rouge2(pool[best], cluster.documents,
                                                    *cluster.references);
      }
    } catch (const DataError& e) {
      throw with_set_context(set_id, e);
    }
  }

  const ScoreMatrix matrix = build_score_matrix(external, clusters);
  const EvaluationReport report = build_report(matrix, selection_scores);
  std::filesystem::create_directories(paths.root);
  save_selections(selections, paths.selections());
  save_report(report, paths.report());
  return report;
}

std::map<std::string, double> run_ablate(const RunConfig& config) {
  validate_config(config);
  const ArtifactPaths paths{config.out};
  if (!std::filesystem::exists(paths.train_features())) {
    throw DataError("feature cache " + paths.train_features().string() +
                    " is missing; run train first");
  }
  const std::vector<FeatureRecord> records = load_features_csv(paths.train_features());
  if (records.empty()) throw DataError("feature cache is empty");

  std::vector<SummaryFeatures> all_raw;
  all_raw.reserve(records.size());
  for (const FeatureRecord& rec : records) all_raw.push_back(rec.features);
  const FeatureScaler scaler = fit_scaler(all_raw);

  std::map<std::string, std::vector<std::pair<SummaryFeatures, double>>> pool_by_set;
  std::map<std::string, std::vector<std::size_t>> rows_by_set;
  for (std::size_t i = 0; i < records.size(); ++i) {
    pool_by_set[records[i].set_id].push_back(
        {apply_scaler(scaler, records[i].features), records[i].label});
    rows_by_set[records[i].set_id].push_back(i);
  }
  const std::vector<RankingPair> pairs = build_pairs(pool_by_set);

  std::map<std::string, double> means;
  for (const std::string& mask : kMaskNames) {
    RankerOptions options;
    options.c = config.ranker_c;
    options.epochs = config.ranker_epochs;
    options.seed = config.seed_ranker;
    options.feature_mask = feature_mask_for(mask);
    options.scaler = scaler;
    const RankerModel model = train_ranksvm(pairs, options);

    double sum = 0.0;
    for (const auto& [set_id, rows] : rows_by_set) {
      std::vector<CandidateSummary> stubs;
      std::vector<double> scores;
      stubs.reserve(rows.size());
      scores.reserve(rows.size());
      for (std::size_t idx : rows) {
        CandidateSummary stub;
        stub.set_id = set_id;
        stub.lambda = records[idx].lambda;
        stub.iteration = records[idx].iteration;
        stub.source = records[idx].source;
        stub.system_id = records[idx].system_id;
        stubs.push_back(std::move(stub));
        scores.push_back(score(model, records[idx].features.concat()));
      }
      sum += records[rows[select_best_index(stubs, scores)]].label;
    }
    means[mask] = sum / static_cast<double>(rows_by_set.size());
  }

  nlohmann::json j;
  j["schema_id"] = "ablation-report/v1";
  for (const auto& [mask, mean] : means) j["masks"][mask] = mean;
  std::ofstream out(paths.ablation());
  if (!out) {
    throw DataError("cannot open ablation report for writing: " +
                    paths.ablation().string());
  }
  out << j.dump(2) << '\n';
  return means;
}

}  // namespace sumrank
