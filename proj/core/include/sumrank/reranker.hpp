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
// Pairwise linear ranking over candidate summaries, final-summary selection,
// and divergence-based reranking baselines.

#ifndef SUMRANK_RERANKER_HPP_
#define SUMRANK_RERANKER_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sumrank/corpus.hpp"
#include "sumrank/ilp.hpp"
#include "sumrank/rerank_features.hpp"

namespace sumrank {

// Minimum quality difference for a candidate pair to carry an order.
inline constexpr double kPairThreshold = 1e-6;

struct RankingPair {
  std::string query_id;        // document set id; no cross-set pairs
  std::vector<double> better;  // scaled feature vector
  std::vector<double> worse;
  double margin = 0.0;  // quality difference, diagnostic only
};

struct RankerModel {
  std::string schema_id;
  std::vector<double> weights;
  FeatureScaler scaler;            // empty min/max = inputs already scaled
  std::vector<bool> feature_mask;  // masked dims have weight 0
  // Training metadata, persisted for provenance.
  double c = 0.0;
  int epochs = 0;
  unsigned long long seed = 0;
  std::size_t pair_count = 0;

  bool trained() const { return !weights.empty(); }
};

struct RankerOptions {
  double c = 1.0;
  int epochs = 100;
  unsigned long long seed = 42;
  std::vector<bool> feature_mask;  // empty = keep every dimension
  FeatureScaler scaler;            // stored on the model for scoring raw rows
};

// All within-set ordered pairs whose quality difference exceeds
// kPairThreshold, oriented better-first. Sets with fewer than two candidates
// contribute nothing (a warning goes to stderr).
std::vector<RankingPair> build_pairs(
    const std::map<std::string, std::vector<std::pair<SummaryFeatures, double>>>&
        pool_by_set);

// Minimizes 1/2 ||w||^2 + c * sum over pairs of max(0, 1 - w·(better-worse))
// by seeded stochastic subgradient descent over shuffled pairs; no bias term.
// Masked dimensions are zeroed in the pair vectors so their weights stay 0.
// Deterministic per seed. Throws DataError on an empty pair list or
// inconsistent dimensions.
RankerModel train_ranksvm(const std::vector<RankingPair>& pairs,
                          const RankerOptions& options);

// w · masked(scaled(f)). The raw-vector overload takes a concatenated raw
// feature row. Throws DataError on dimension mismatch or untrained model.
double score(const RankerModel& m, const std::vector<double>& raw_features);
double score(const RankerModel& m, const SummaryFeatures& f);

// Argmax by score; exact ties broken by lambda ascending, then iteration
// ascending, then pool order. Throws DataError on an empty pool or a
// score/pool size mismatch.
std::size_t select_best_index(const std::vector<CandidateSummary>& pool,
                              const std::vector<double>& scores);
CandidateSummary select_best(const std::vector<CandidateSummary>& pool,
                             const std::vector<double>& scores);

enum class DivergenceMetric { kJs, kKl };

// Divergence between the candidate text and the document set text over
// Lidstone-smoothed unigram distributions (stopwords included). For the
// asymmetric KL metric, kl_from_summary selects KL(summary||documents)
// (default) versus KL(documents||summary).
double candidate_divergence(const CandidateSummary& c, const DocumentSet& ds,
                            DivergenceMetric metric, bool kl_from_summary = true);

// Pool sorted ascending by divergence (best first); ties keep pool order.
std::vector<CandidateSummary> divergence_rank(const std::vector<CandidateSummary>& pool,
                                              const DocumentSet& ds,
                                              DivergenceMetric metric,
                                              bool kl_from_summary = true);

// JSON persistence:
// {schema_id, weights, scaler:{min,max}, feature_mask, training:{...}}.
void save_ranker(const RankerModel& m, const std::filesystem::path& path);
RankerModel load_ranker(const std::filesystem::path& path);

}  // namespace sumrank

#endif  // SUMRANK_RERANKER_HPP_
