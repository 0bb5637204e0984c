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

#ifndef SUMRANK_ROUGE_HPP_
#define SUMRANK_ROUGE_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sumrank/corpus.hpp"

namespace sumrank {

// Multiset of word bigrams. Stopwords are kept; bigrams never cross sentence
// boundaries.
struct BigramBag {
  std::map<std::pair<std::string, std::string>, int> counts;
  int total = 0;
};

// Collects within-sentence bigrams from a list of tokenized sentences.
BigramBag bigrams(const std::vector<std::vector<std::string>>& sentences);

// Bigram recall of the candidate against each reference (clipped counts,
// i.e. sum of min(candidate count, reference count) over the reference's
// bigrams divided by the reference's bigram total), averaged over references.
// Returns a fraction in [0, 1]; reports multiply by 100 for display.
// Throws DataError when refs is empty or a reference has no bigrams.
double rouge2_recall(const std::vector<std::vector<std::string>>& candidate,
                     const ReferenceSet& refs);

}  // namespace sumrank

#endif  // SUMRANK_ROUGE_HPP_
