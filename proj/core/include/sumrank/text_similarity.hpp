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

#ifndef SUMRANK_TEXT_SIMILARITY_HPP_
#define SUMRANK_TEXT_SIMILARITY_HPP_

#include <map>
#include <set>
#include <string>

namespace sumrank {

using CountMap = std::map<std::string, int>;

// Cosine similarity between two sparse count/weight vectors; 0 when either
// vector is empty or has zero norm.
double cosine_similarity(const std::map<std::string, double>& a,
                         const std::map<std::string, double>& b);
double cosine_similarity(const CountMap& a, const CountMap& b);

// |a ∩ b| / |a ∪ b| over type sets; 0 when the union is empty.
double jaccard_similarity(const std::set<std::string>& a,
                          const std::set<std::string>& b);

// Smoothing constant for the divergence estimates below.
inline constexpr double kLidstoneAlpha = 0.001;

// Jensen-Shannon divergence between the Lidstone-smoothed unigram
// distributions of two texts, natural log, over the union vocabulary.
// Symmetric, in [0, ln 2].
double js_divergence(const CountMap& p, const CountMap& q);

// KL(p || q) with the same smoothing and vocabulary convention. Asymmetric.
double kl_divergence(const CountMap& p, const CountMap& q);

}  // namespace sumrank

#endif  // SUMRANK_TEXT_SIMILARITY_HPP_
