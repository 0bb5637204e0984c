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

#include "sumrank/rouge.hpp"

#include <algorithm>

namespace sumrank {

BigramBag bigrams(const std::vector<std::vector<std::string>>& sentences) {
  BigramBag bag;
  for (const std::vector<std::string>& sentence : sentences) {
    for (std::size_t i = 0; i + 1 < sentence.size(); ++i) {
      ++bag.counts[{sentence[i], sentence[i + 1]}];
      ++bag.total;
    }
  }
  return bag;
}

double rouge2_recall(const std::vector<std::vector<std::string>>& candidate,
                     const ReferenceSet& refs) {
  if (refs.references.empty()) {
    throw DataError("reference set " + refs.set_id + " has no references");
  }
  const BigramBag cand = bigrams(candidate);
  double sum = 0.0;
  for (std::size_t r = 0; r < refs.references.size(); ++r) {
    const BigramBag ref = bigrams(refs.references[r]);
    if (ref.total == 0) {
      throw DataError("reference " + std::to_string(r) + " of set " +
                      refs.set_id + " has no bigrams");
    }
    long long match = 0;
    for (const auto& [bigram, count] : ref.counts) {
      auto it = cand.counts.find(bigram);
      if (it != cand.counts.end()) match += std::min(count, it->second);
    }
    sum += static_cast<double>(match) / static_cast<double>(ref.total);
  }
  return sum / static_cast<double>(refs.references.size());
}

}  // namespace sumrank
