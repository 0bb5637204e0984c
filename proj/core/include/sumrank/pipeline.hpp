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
//
// End-to-end orchestration: configuration, artifact layout, and the train /
// summarize / evaluate / rerank-external / ablate runs.

#ifndef SUMRANK_PIPELINE_HPP_
#define SUMRANK_PIPELINE_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sumrank/corpus.hpp"
#include "sumrank/ilp.hpp"
#include "sumrank/report.hpp"

namespace sumrank {

// Every field mirrors a CLI flag and a config-file key of the same name
// (flags override the file). All randomness funnels through the two seeds.
struct RunConfig {
  int budget = 100;
  LengthUnit unit = LengthUnit::kWords;
  std::vector<double> lambdas;  // empty -> {0.0 .. 0.9}
  int per_lambda = 10;
  double beta = 0.6;
  long long timeout_ms = 0;  // per solver call; <= 0 unlimited
  std::string embeddings;    // embedding file; empty = feature dims stay 0
  std::string mask = "all";  // all|no-word|no-sentence|no-summary|no-embedding
  bool kl_from_summary = true;  // KL(summary||documents) when true
  double svr_c = 1.0;
  double svr_epsilon = 0.1;
  int svr_epochs = 50;
  unsigned long long seed_svr = 42;
  double ranker_c = 1.0;
  int ranker_epochs = 100;
  unsigned long long seed_ranker = 42;
  int jobs = 1;              // worker threads over document sets
  std::string out = "artifacts";  // artifact directory
};

// JSON config file with exactly the RunConfig keys; unknown keys are an
// error. Missing keys keep their defaults.
RunConfig load_config(const std::filesystem::path& path);
void validate_config(const RunConfig& config);

// Ablation switch -> per-dimension keep flags over the 23 ranking features.
// Throws DataError on an unknown name.
std::vector<bool> feature_mask_for(const std::string& mask);
extern const std::vector<std::string> kMaskNames;  // the five ablation runs

// Fixed artifact layout under the configured output directory.
struct ArtifactPaths {
  std::filesystem::path root;
  std::filesystem::path word_model() const { return root / "word_model.json"; }
  std::filesystem::path sentence_model() const { return root / "sentence_model.json"; }
  std::filesystem::path ranker() const { return root / "ranker.json"; }
  std::filesystem::path manifest() const { return root / "manifest.json"; }
  std::filesystem::path train_features() const { return root / "train_features.csv"; }
  std::filesystem::path pool() const { return root / "pool.jsonl"; }
  std::filesystem::path selections() const { return root / "selections.jsonl"; }
  std::filesystem::path report() const { return root / "report.json"; }
  std::filesystem::path ablation() const { return root / "ablation.json"; }
  std::filesystem::path summaries_dir() const { return root / "summaries"; }
};

// One chosen summary. sentence_ids is empty for external candidates and for
// sets whose budget admits no sentence (then text is empty too).
struct SelectionRow {
  std::string set_id;
  std::string system_id;  // external selections only
  std::vector<int> sentence_ids;
  std::string text;
  double score = 0.0;
};

// JSONL: {"set_id","system_id","sentence_ids","text","score"}.
void save_selections(const std::vector<SelectionRow>& selections,
                     const std::filesystem::path& path);
std::vector<SelectionRow> load_selections(const std::filesystem::path& path);

// Trains the word/sentence importance models on the corpus (references
// required), generates per-set candidate pools, labels them, dumps the
// feature cache, and trains the ranker. Persists word_model.json,
// sentence_model.json, ranker.json, train_features.csv, and manifest.json.
void run_train(const std::filesystem::path& corpus_path, const RunConfig& config);

// Applies the trained artifacts to a corpus: per set, generate the pool,
// score it, select the best candidate. Persists pool.jsonl, selections.jsonl,
// and summaries/<set_id>.txt.
void run_summarize(const std::filesystem::path& corpus_path, const RunConfig& config);

// Scores a generated pool against the corpus references; the optional
// selections file adds the approach row. Persists report.json.
EvaluationReport run_evaluate(const std::filesystem::path& corpus_path,
                              const std::filesystem::path& pool_path,
                              const std::filesystem::path& selections_path,
                              const RunConfig& config);

// Reranks externally supplied candidates with the trained ranker and reports
// selection quality against the per-system grid. Persists selections.jsonl
// and report.json.
EvaluationReport run_rerank_external(const std::filesystem::path& corpus_path,
                                     const std::filesystem::path& candidates_path,
                                     const RunConfig& config);

// Retrains the ranker from the feature cache under each ablation mask and
// reports the mean selection quality per mask. Persists ablation.json.
std::map<std::string, double> run_ablate(const RunConfig& config);

}  // namespace sumrank

#endif  // SUMRANK_PIPELINE_HPP_
