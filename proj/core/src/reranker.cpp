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

#include "sumrank/reranker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>

#include <json.hpp>

#include "sumrank/random.hpp"
#include "sumrank/text_similarity.hpp"

namespace sumrank {

std::vector<RankingPair> build_pairs(
    const std::map<std::string, std::vector<std::pair<SummaryFeatures, double>>>&
        pool_by_set) {
  std::vector<RankingPair> pairs;
  for (const auto& [set_id, candidates] : pool_by_set) {
    if (candidates.size() < 2) {
      std::cerr << "warning: set " << set_id << " has " << candidates.size()
                << " candidate(s); it contributes no ranking pairs\n";
      continue;
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      for (std::size_t j = i + 1; j < candidates.size(); ++j) {
        const double diff = candidates[i].second - candidates[j].second;
        if (std::fabs(diff) <= kPairThreshold) continue;
        RankingPair pair;
        pair.query_id = set_id;
        if (diff > 0) {
          pair.better = candidates[i].first.concat();
          pair.worse = candidates[j].first.concat();
          pair.margin = diff;
        } else {
          pair.better = candidates[j].first.concat();
          pair.worse = candidates[i].first.concat();
          pair.margin = -diff;
        }
        pairs.push_back(std::move(pair));
      }
    }
  }
  return pairs;
}

RankerModel train_ranksvm(const std::vector<RankingPair>& pairs,
                          const RankerOptions& options) {
  if (pairs.empty()) throw DataError("ranker training needs at least one pair");
  const std::size_t dim = pairs.front().better.size();
  if (dim == 0) throw DataError("ranking pairs have zero-dimensional features");
  if (!options.feature_mask.empty() && options.feature_mask.size() != dim) {
    throw DataError("feature mask dimension does not match the pairs");
  }
  std::vector<std::vector<double>> diffs;
  diffs.reserve(pairs.size());
  for (const RankingPair& pair : pairs) {
    if (pair.better.size() != dim || pair.worse.size() != dim) {
      throw DataError("ranking pairs have inconsistent dimensions");
    }
    std::vector<double> diff(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      const bool keep = options.feature_mask.empty() || options.feature_mask[d];
      diff[d] = keep ? pair.better[d] - pair.worse[d] : 0.0;
    }
    diffs.push_back(std::move(diff));
  }

  const double n = static_cast<double>(pairs.size());
  const double reg = 1.0 / (options.c * n);
  std::vector<double> w(dim, 0.0);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(options.seed);

  long long t = 1;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    deterministic_shuffle(order, rng);
    for (std::size_t idx : order) {
      const std::vector<double>& diff = diffs[idx];
      double margin = 0.0;
      for (std::size_t d = 0; d < dim; ++d) margin += w[d] * diff[d];
      const double eta = 1.0 / (reg * static_cast<double>(t));
      const double shrink = 1.0 - 1.0 / static_cast<double>(t);
      for (double& wd : w) wd *= shrink;
      if (margin < 1.0) {
        for (std::size_t d = 0; d < dim; ++d) w[d] += eta * diff[d];
      }
      ++t;
    }
  }

  RankerModel model;
  model.schema_id = kRerankFeatureSchema;
  model.weights = std::move(w);
  model.scaler = options.scaler;
  model.feature_mask = options.feature_mask.empty()
                           ? std::vector<bool>(dim, true)
                           : options.feature_mask;
  for (std::size_t d = 0; d < dim; ++d) {
    if (!model.feature_mask[d]) model.weights[d] = 0.0;
  }
  model.c = options.c;
  model.epochs = options.epochs;
  model.seed = options.seed;
  model.pair_count = pairs.size();
  return model;
}

double score(const RankerModel& m, const std::vector<double>& raw_features) {
  if (!m.trained()) throw DataError("ranker model is untrained");
  if (raw_features.size() != m.weights.size()) {
    throw DataError("feature dimension " + std::to_string(raw_features.size()) +
                    " does not match ranker dimension " +
                    std::to_string(m.weights.size()));
  }
  const bool scale = !m.scaler.min.empty();
  if (scale && m.scaler.min.size() != m.weights.size()) {
    throw DataError("ranker scaler dimension does not match its weights");
  }
  double value = 0.0;
  for (std::size_t d = 0; d < raw_features.size(); ++d) {
    if (!m.feature_mask.empty() && !m.feature_mask[d]) continue;
    double x = raw_features[d];
    if (scale) {
      if (m.scaler.max[d] <= m.scaler.min[d]) {
        x = 0.0;
      } else {
        x = std::clamp((x - m.scaler.min[d]) / (m.scaler.max[d] - m.scaler.min[d]),
                       0.0, 1.0);
      }
    }
    value += m.weights[d] * x;
  }
  return value;
}

double score(const RankerModel& m, const SummaryFeatures& f) {
  return score(m, f.concat());
}

std::size_t select_best_index(const std::vector<CandidateSummary>& pool,
                              const std::vector<double>& scores) {
  if (pool.empty()) throw DataError("cannot select from an empty pool");
  if (pool.size() != scores.size()) {
    throw DataError("pool and score list sizes differ");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < pool.size(); ++i) {
    if (scores[i] > scores[best]) {
      best = i;
    } else if (scores[i] == scores[best]) {
      if (pool[i].lambda < pool[best].lambda ||
          (pool[i].lambda == pool[best].lambda &&
           pool[i].iteration < pool[best].iteration)) {
        best = i;
      }
    }
  }
  return best;
}

CandidateSummary select_best(const std::vector<CandidateSummary>& pool,
                             const std::vector<double>& scores) {
  return pool[select_best_index(pool, scores)];
}

double candidate_divergence(const CandidateSummary& c, const DocumentSet& ds,
                            DivergenceMetric metric, bool kl_from_summary) {
  const ResolvedCandidate resolved = resolve_candidate(c, ds);
  CountMap summary_counts;
  for (const Token& t : resolved.tokens) ++summary_counts[t.lower];
  CountMap doc_counts;
  for (const Sentence& s : ds.sentences) {
    for (const Token& t : s.tokens) ++doc_counts[t.lower];
  }
  if (metric == DivergenceMetric::kJs) {
    return js_divergence(summary_counts, doc_counts);
  }
  return kl_from_summary ? kl_divergence(summary_counts, doc_counts)
                         : kl_divergence(doc_counts, summary_counts);
}

std::vector<CandidateSummary> divergence_rank(const std::vector<CandidateSummary>& pool,
                                              const DocumentSet& ds,
                                              DivergenceMetric metric,
                                              bool kl_from_summary) {
  std::vector<double> divergences(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    divergences[i] = candidate_divergence(pool[i], ds, metric, kl_from_summary);
  }
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return divergences[a] < divergences[b];
  });
  std::vector<CandidateSummary> ranked;
  ranked.reserve(pool.size());
  for (std::size_t i : order) ranked.push_back(pool[i]);
  return ranked;
}

void save_ranker(const RankerModel& m, const std::filesystem::path& path) {
  nlohmann::json j;
  j["schema_id"] = m.schema_id;
  j["weights"] = m.weights;
  j["scaler"]["min"] = m.scaler.min;
  j["scaler"]["max"] = m.scaler.max;
  j["feature_mask"] = m.feature_mask;
  j["training"]["c"] = m.c;
  j["training"]["epochs"] = m.epochs;
  j["training"]["seed"] = m.seed;
  j["training"]["pairs"] = m.pair_count;
  std::ofstream out(path);
  if (!out) throw DataError("cannot open ranker file for writing: " + path.string());
  out << j.dump(2) << '\n';
}

RankerModel load_ranker(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ranker file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("ranker file " + path.string() + ": " + e.what());
  }
  RankerModel m;
  try {
    m.schema_id = j.at("schema_id").get<std::string>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.scaler.min = j.at("scaler").at("min").get<std::vector<double>>();
    m.scaler.max = j.at("scaler").at("max").get<std::vector<double>>();
    m.feature_mask = j.at("feature_mask").get<std::vector<bool>>();
    m.c = j.at("training").at("c").get<double>();
    m.epochs = j.at("training").at("epochs").get<int>();
    m.seed = j.at("training").at("seed").get<unsigned long long>();
    m.pair_count = j.at("training").at("pairs").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("ranker file " + path.string() + ": " + e.what());
  }
  if (m.feature_mask.size() != m.weights.size() ||
      (!m.scaler.min.empty() && m.scaler.min.size() != m.weights.size()) ||
      m.scaler.min.size() != m.scaler.max.size()) {
    throw DataError("ranker file " + path.string() + ": inconsistent dimensions");
  }
  return m;
}

}  // namespace sumrank
