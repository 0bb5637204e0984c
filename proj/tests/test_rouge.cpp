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

#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "sumrank/random.hpp"
#include "sumrank/rouge.hpp"

using namespace sumrank;

namespace {

using Sentences = std::vector<std::vector<std::string>>;

ReferenceSet make_refs(std::vector<Sentences> references) {
  ReferenceSet refs;
  refs.set_id = "t";
  for (Sentences& r : references) refs.references.push_back(std::move(r));
  return refs;
}

Sentences random_sentences(std::mt19937_64& rng, int max_sent, int max_len) {
  static const std::vector<std::string> bank = {"a", "b", "c", "d", "e",
                                                "f", "g", "h"};
  Sentences out;
  const int count = 1 + static_cast<int>(uniform_below(rng, max_sent));
  for (int s = 0; s < count; ++s) {
    std::vector<std::string> sentence;
    const int len = 2 + static_cast<int>(uniform_below(rng, max_len));
    for (int t = 0; t < len; ++t) {
      sentence.push_back(bank[uniform_below(rng, bank.size())]);
    }
    out.push_back(std::move(sentence));
  }
  return out;
}

}  // namespace

TEST_CASE("bigrams within sentences only") {
  const BigramBag one = bigrams({{"a", "b", "c"}});
  CHECK(one.total == 2);
  CHECK(one.counts.at({"a", "b"}) == 1);
  CHECK(one.counts.at({"b", "c"}) == 1);

  const BigramBag split = bigrams({{"a", "b"}, {"b", "c"}});
  CHECK(split.total == 2);
  CHECK(split.counts.count({"b", "b"}) == 0);  // no cross-sentence bigram

  CHECK(bigrams({{"x"}}).total == 0);
  CHECK(bigrams({}).total == 0);

  const BigramBag repeated = bigrams({{"a", "b", "a", "b"}});
  CHECK(repeated.counts.at({"a", "b"}) == 2);  // multiplicity kept
  CHECK(repeated.total == 3);
}

TEST_CASE("rouge2_recall identity is 1") {
  const Sentences cand = {{"the", "flood", "hit", "town"}};
  CHECK(rouge2_recall(cand, make_refs({cand})) == doctest::Approx(1.0));
}

TEST_CASE("rouge2_recall disjoint is 0") {
  const Sentences cand = {{"alpha", "beta", "gamma"}};
  const Sentences ref = {{"delta", "epsilon", "zeta"}};
  CHECK(rouge2_recall(cand, make_refs({ref})) == doctest::Approx(0.0));
}

TEST_CASE("rouge2_recall hand-computed two-sentence reference") {
  // Reference bigrams {(a,b),(b,d),(b,c)}; candidate matches (a,b) and (b,c).
  const Sentences cand = {{"a", "b", "c"}};
  const Sentences ref = {{"a", "b", "d"}, {"b", "c"}};
  CHECK(rouge2_recall(cand, make_refs({ref})) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("rouge2_recall averages over multiple references") {
  const Sentences cand = {{"a", "b", "c"}};
  const Sentences full = {{"a", "b", "c"}};     // recall 1
  const Sentences miss = {{"d", "e"}};          // recall 0
  CHECK(rouge2_recall(cand, make_refs({full, miss})) == doctest::Approx(0.5));
}

TEST_CASE("rouge2_recall clips candidate multiplicity") {
  // Candidate has (a,b) once; reference wants it twice -> 1/2.
  const Sentences cand = {{"a", "b"}};
  const Sentences ref = {{"a", "b"}, {"a", "b"}};
  CHECK(rouge2_recall(cand, make_refs({ref})) == doctest::Approx(0.5));
}

TEST_CASE("rouge2_recall error cases") {
  const Sentences cand = {{"a", "b"}};
  CHECK_THROWS_AS(rouge2_recall(cand, make_refs({})), DataError);
  // A reference without a single bigram cannot be scored.
  CHECK_THROWS_AS(rouge2_recall(cand, make_refs({{{"x"}}})), DataError);
}

TEST_CASE("rouge2_recall monotone under sentence addition") {
  std::mt19937_64 rng(20260814);
  for (int trial = 0; trial < 100; ++trial) {
    Sentences cand = random_sentences(rng, 3, 5);
    const ReferenceSet refs = make_refs({random_sentences(rng, 3, 5)});
    const double before = rouge2_recall(cand, refs);
    cand.push_back(random_sentences(rng, 1, 5)[0]);
    const double after = rouge2_recall(cand, refs);
    CHECK(after >= before - 1e-15);
    CHECK(after >= 0.0);
    CHECK(after <= 1.0);
  }
}

TEST_CASE("rouge2_recall invariant under candidate sentence permutation") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Sentences cand = random_sentences(rng, 4, 5);
    const ReferenceSet refs = make_refs({random_sentences(rng, 3, 5)});
    const double before = rouge2_recall(cand, refs);
    deterministic_shuffle(cand, rng);
    CHECK(rouge2_recall(cand, refs) == doctest::Approx(before).epsilon(1e-12));
  }
}
