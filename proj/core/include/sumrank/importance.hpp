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

#ifndef SUMRANK_IMPORTANCE_HPP_
#define SUMRANK_IMPORTANCE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sumrank/corpus.hpp"

namespace sumrank {

inline constexpr int kWordFeatureDim = 15;
inline constexpr int kSentenceFeatureDim = 13;

inline constexpr const char* kWordFeatureSchema = "word-features/15/v1-extended";
inline constexpr const char* kSentenceFeatureSchema = "sentence-features/13/v1";

// Linear regressor with its min-max feature scaler.
struct LinearModel {
  std::string schema_id;
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> scaler_min;
  std::vector<double> scaler_max;

  bool trained() const { return !weights.empty(); }
};

struct RegressionInstance {
  std::vector<double> features;
  double target = 0.0;
};

// 15 word-importance features:
//  [0] set-level TF                  [1] set-level DF
//  [2..5] majority-POS flags (noun, verb, adjective, adverb)
//  [6] majority named-entity flag    [7] numeric-form flag
//  [8..10] max/min/mean position weight of containing sentences
//  [11] containing-sentence share of |S|
//  [12] mean token count of containing sentences
//  [13] occurs in a document's first sentence
//  [14] character length of the word
std::vector<double> word_features(const WordStats& w, const DocumentSet& ds);

// 13 sentence-importance features:
//  [0] position weight               [1] token count
//  [2] subsentence count             [3] parse depth
//  [4] stopword proportion
//  [5..6] mean TF / mean DF over non-stopword tokens (0 if none)
//  [7..12] proportions of noun/verb/adjective/adverb/named-entity/number
//          tokens over all tokens
std::vector<double> sentence_features(const Sentence& s, const DocumentSet& ds);

// Training target for a word: its total occurrence count across the
// reference summaries.
double word_target(const WordStats& w, const ReferenceSet& refs);

// Training target for a sentence: maximum cosine similarity between its
// non-stopword unigram counts and those of any reference sentence.
double sentence_target(const Sentence& s, const ReferenceSet& refs);

struct SvrOptions {
  double c = 1.0;
  double epsilon = 0.1;
  int epochs = 50;
  std::uint64_t seed = 42;
};

// Epsilon-insensitive linear support vector regression,
//   minimize 1/2 ||w||^2 + c * sum_i max(0, |w.x_i + b - y_i| - epsilon),
// trained by seeded stochastic subgradient descent with step 1/(reg * t).
// Features are min-max scaled to [0, 1] from the training extrema (constant
// features map to 0); the scaler is stored on the model. Deterministic for a
// fixed seed. Throws DataError on empty, inconsistently sized, or non-finite
// data.
LinearModel train_svr(const std::vector<RegressionInstance>& data,
                      const SvrOptions& options, const std::string& schema_id);

// Applies the stored scaler (clamping to [0, 1]) and returns
// max(0, w.x + b). Throws DataError on dimension mismatch or untrained model.
double predict(const LinearModel& model, std::span<const double> features);

// JSON persistence: {"schema_id", "weights", "bias", "scaler_min",
// "scaler_max"}. Floats round-trip exactly.
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace sumrank

#endif  // SUMRANK_IMPORTANCE_HPP_
