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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "sumrank/corpus.hpp"
#include "sumrank/ilp.hpp"
#include "sumrank/importance.hpp"
#include "support/synthetic.hpp"

using namespace sumrank;
using sumrank_tests::brute_force_solve;
using sumrank_tests::random_instance;

namespace {

// l, u, v and incidence chosen by hand; used by the objective fixtures.
ILPInstance toy_instance(double lambda) {
  ILPInstance inst;
  inst.budget = 10;
  inst.lambda = lambda;
  inst.sentence_ids = {0, 1, 2};
  inst.lengths = {4, 5, 6};
  inst.u = {1.0, 2.0, 0.5};
  inst.v = {3.0, 1.0, 2.0};               // words w0, w1, w2
  inst.incidence = {{0, 1}, {1, 2}, {0}};
  inst.words = {"w0", "w1", "w2"};
  return inst;
}

LinearModel constant_model(int dims, double value, const std::string& schema) {
  LinearModel m;
  m.schema_id = schema;
  m.weights.assign(dims, 0.0);
  m.bias = value;
  m.scaler_min.assign(dims, 0.0);
  m.scaler_max.assign(dims, 1.0);
  return m;
}

std::vector<Cluster> parse_inline(const std::string& name, const std::string& jsonl) {
  const auto path = std::filesystem::temp_directory_path() / ("sumrank_ilp_" + name);
  {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << jsonl;
  }
  std::vector<Cluster> clusters = parse_corpus(path);
  std::filesystem::remove(path);
  return clusters;
}

}  // namespace

TEST_CASE("objective fixtures") {
  const ILPInstance inst = toy_instance(0.5);
  CHECK(objective(inst, {}) == doctest::Approx(0.0));

  // lambda=1: only the sentence term, (l_1/L) * u_1.
  const ILPInstance pure = toy_instance(1.0);
  CHECK(objective(pure, {1}) == doctest::Approx(5.0 / 10.0 * 2.0));

  // Hand computation at lambda=0.5 with sentences {0,1}: lengths 4+5,
  // covered words {0,1,2} with scores 3+1+2.
  const double sentence_term = 0.5 * (4.0 / 10.0 * 1.0 + 5.0 / 10.0 * 2.0);
  const double word_term = 0.5 * (1.0 / 10.0) * (3.0 + 1.0 + 2.0);
  CHECK(objective(inst, {0, 1}) == doctest::Approx(sentence_term + word_term));

  // lambda=0: word coverage only.
  const ILPInstance cover = toy_instance(0.0);
  CHECK(objective(cover, {0}) == doctest::Approx(0.1 * (3.0 + 1.0)));
  CHECK(objective(cover, {2}) == doctest::Approx(0.1 * 3.0));

  CHECK_THROWS_AS(objective(inst, {7}), DataError);
  CHECK_THROWS_AS(objective(inst, {0, 0}), DataError);
}

TEST_CASE("solve on hand instances") {
  // Budget excludes everything.
  ILPInstance tight = toy_instance(0.5);
  tight.budget = 3;
  const Selection none = solve(tight);
  CHECK(none.chosen.empty());
  CHECK(none.objective == doctest::Approx(0.0));
  CHECK(none.proven_optimal);

  // lambda=1, unit lengths, budget 2, u=(5,4,3): pick the two heaviest.
  ILPInstance units;
  units.budget = 2;
  units.lambda = 1.0;
  units.sentence_ids = {0, 1, 2};
  units.lengths = {1, 1, 1};
  units.u = {5.0, 4.0, 3.0};
  units.v = {};
  units.incidence = {{}, {}, {}};
  // Rows without any word are dropped by build_instance, but hand-built
  // instances may carry them; give each row one private word.
  units.words = {"w0", "w1", "w2"};
  units.incidence = {{0}, {1}, {2}};
  units.v = {0.0, 0.0, 0.0};
  const Selection best = solve(units);
  CHECK(best.chosen == std::vector<int>{0, 1});
  CHECK(best.objective == doctest::Approx((5.0 + 4.0) / 2.0));
}

TEST_CASE("solve returns the lexicographically smallest optimum") {
  // Two disjoint optima of identical value: {0} and {1}.
  ILPInstance inst;
  inst.budget = 2;
  inst.lambda = 1.0;
  inst.sentence_ids = {0, 1};
  inst.lengths = {2, 2};
  inst.u = {1.0, 1.0};
  inst.v = {0.0, 0.0};
  inst.incidence = {{0}, {1}};
  inst.words = {"w0", "w1"};
  const Selection s = solve(inst);
  CHECK(s.chosen == std::vector<int>{0});
}

TEST_CASE("exclusion caps restrict reuse") {
  ILPInstance inst = toy_instance(1.0);
  inst.budget = 15;  // all three fit
  const Selection all = solve(inst);
  CHECK(all.chosen == std::vector<int>{0, 1, 2});

  // Cap: at most one of {0, 1, 2}. The best single sentence wins.
  inst.exclusions.push_back({{0, 1, 2}, 1});
  const Selection capped = solve(inst);
  CHECK(capped.chosen == std::vector<int>{1});
  for (const ExclusionConstraint& ex : inst.exclusions) {
    int overlap = 0;
    for (int member : ex.members) {
      overlap += std::binary_search(capped.chosen.begin(), capped.chosen.end(),
                                    member)
                     ? 1
                     : 0;
    }
    CHECK(overlap <= ex.cap);
  }
}

TEST_CASE("solve agrees with the brute-force oracle") {
  std::mt19937_64 rng(20260814);
  const double lambdas[] = {0.0, 0.3, 0.7, 1.0};
  for (int trial = 0; trial < 60; ++trial) {
    const ILPInstance inst = random_instance(rng, 10, 25, lambdas[trial % 4],
                                             trial % 2 == 1);
    const Selection got = solve(inst);
    const Selection want = brute_force_solve(inst);
    CAPTURE(trial);
    CHECK(got.objective == doctest::Approx(want.objective).epsilon(1e-9));
    CHECK(got.chosen == want.chosen);
    CHECK(got.proven_optimal);

    // Constraints verified by recomputation, not trusted from the solver.
    int total = 0;
    std::set<int> covered;
    for (int i : got.chosen) {
      total += inst.lengths[i];
      covered.insert(inst.incidence[i].begin(), inst.incidence[i].end());
    }
    CHECK(total <= inst.budget);
    CHECK(total == got.total_length);
    CHECK(std::vector<int>(covered.begin(), covered.end()) == got.covered);
    CHECK(objective(inst, got.chosen) ==
          doctest::Approx(got.objective).epsilon(1e-12));
  }
}

TEST_CASE("relaxing the budget never lowers the unnormalized optimum") {
  // The objective divides by the budget, so the comparable quantity across
  // budgets is objective * budget: a superset of feasible selections can only
  // raise it.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    ILPInstance inst = random_instance(rng, 9, 20, 0.5, false);
    const double before = solve(inst).objective * inst.budget;
    inst.budget += 3;
    const double after = solve(inst).objective * inst.budget;
    CHECK(after >= before - 1e-12);
  }
}

TEST_CASE("solve is deterministic") {
  std::mt19937_64 rng(6);
  const ILPInstance inst = random_instance(rng, 10, 20, 0.4, true);
  const Selection a = solve(inst);
  const Selection b = solve(inst);
  CHECK(a.chosen == b.chosen);
  CHECK(a.objective == b.objective);
}

TEST_CASE("build_instance maps lengths, scores and vocabulary") {
  const auto clusters = parse_inline(
      "build.jsonl",
      R"({"set_id":"b","documents":[{"doc_id":0,"sentences":[)"
      R"({"text":"Flood hits town."},{"text":"The of and."},{"text":"Calm day follows."}]}]})"
      "\n");
  const DocumentSet& ds = clusters[0].documents;
  const LinearModel sentence_model = constant_model(13, 2.0, kSentenceFeatureSchema);
  const LinearModel word_model = constant_model(15, 1.5, kWordFeatureSchema);

  const ILPInstance words =
      build_instance(ds, sentence_model, word_model, 0.5, 10, LengthUnit::kWords);
  // "The of and." holds no vocabulary word and is dropped.
  REQUIRE(words.size() == 2);
  CHECK(words.sentence_ids == std::vector<int>{0, 2});
  CHECK(words.lengths == std::vector<int>{3, 3});
  CHECK(words.words.size() == ds.vocabulary.size());
  for (double u : words.u) CHECK(u == doctest::Approx(2.0));
  for (double v : words.v) CHECK(v == doctest::Approx(1.5));

  const ILPInstance bytes =
      build_instance(ds, sentence_model, word_model, 0.5, 100, LengthUnit::kBytes);
  CHECK(bytes.lengths == std::vector<int>{16, 17});  // raw byte counts

  // Sentences longer than the budget stay in the instance.
  const ILPInstance tiny =
      build_instance(ds, sentence_model, word_model, 0.5, 1, LengthUnit::kWords);
  CHECK(tiny.size() == 2);
  CHECK(solve(tiny).chosen.empty());

  CHECK_THROWS_AS(
      build_instance(ds, LinearModel{}, word_model, 0.5, 10, LengthUnit::kWords),
      DataError);
  CHECK_THROWS_AS(build_instance(ds, sentence_model, word_model, 0.5, 0,
                                 LengthUnit::kWords),
                  DataError);
}

TEST_CASE("generate_candidates shapes the pool") {
  const auto clusters = parse_inline(
      "gen.jsonl",
      R"({"set_id":"g","documents":[)"
      R"({"doc_id":0,"sentences":[{"text":"Alpha beta gamma delta."},{"text":"Beta epsilon."},)"
      R"({"text":"Gamma zeta eta."},{"text":"Delta theta."}]},)"
      R"({"doc_id":1,"sentences":[{"text":"Alpha iota kappa."},{"text":"Lambda mu."},)"
      R"({"text":"Nu xi omicron."},{"text":"Epsilon pi."}]}]})"
      "\n");
  const DocumentSet& ds = clusters[0].documents;
  const LinearModel sentence_model = constant_model(13, 1.0, kSentenceFeatureSchema);
  const LinearModel word_model = constant_model(15, 1.0, kWordFeatureSchema);

  GenerationOptions options;
  options.budget = 6;
  options.per_lambda = 2;
  options.lambdas = {0.0, 0.5};
  const std::vector<CandidateSummary> pool =
      generate_candidates(ds, sentence_model, word_model, options);
  REQUIRE(pool.size() == 4);  // 2 lambdas x 2 iterations
  CHECK(pool[0].lambda == doctest::Approx(0.0));
  CHECK(pool[0].iteration == 1);
  CHECK(pool[1].lambda == doctest::Approx(0.0));
  CHECK(pool[1].iteration == 2);
  CHECK(pool[2].lambda == doctest::Approx(0.5));
  CHECK(pool[3].iteration == 2);
  for (const CandidateSummary& c : pool) {
    CHECK(c.set_id == "g");
    CHECK(c.source == CandidateSource::kIlp);
    CHECK_FALSE(c.sentence_ids.empty());
    int total = 0;
    for (int id : c.sentence_ids) total += ds.sentences[id].word_length;
    CHECK(total <= options.budget);
    // Text is the '\n' join of the chosen sentences in document order.
    std::string expected;
    for (std::size_t k = 0; k < c.sentence_ids.size(); ++k) {
      if (k > 0) expected += '\n';
      expected += ds.sentences[c.sentence_ids[k]].text;
    }
    CHECK(c.text == expected);
  }

  // The diversity cap binds: iteration 2 reuses at most floor(0.6 |X_1|)
  // sentences of iteration 1.
  for (std::size_t base = 0; base < pool.size(); base += 2) {
    const std::vector<int>& first = pool[base].sentence_ids;
    const std::vector<int>& second = pool[base + 1].sentence_ids;
    int overlap = 0;
    for (int id : second) {
      overlap += std::count(first.begin(), first.end(), id) > 0 ? 1 : 0;
    }
    CHECK(overlap <= static_cast<int>(0.6 * static_cast<double>(first.size())));
  }
}

TEST_CASE("a single-sentence set stops each lambda after one candidate") {
  const auto clusters = parse_inline(
      "single.jsonl",
      R"({"set_id":"s","documents":[{"doc_id":0,"sentences":[{"text":"Only flood here."}]}]})"
      "\n");
  const DocumentSet& ds = clusters[0].documents;
  GenerationOptions options;
  options.budget = 10;
  options.lambdas = {0.0, 0.5, 0.9};
  const std::vector<CandidateSummary> pool = generate_candidates(
      ds, constant_model(13, 1.0, kSentenceFeatureSchema),
      constant_model(15, 1.0, kWordFeatureSchema), options);
  // Iteration 2 would need |chosen ∩ {s}| <= floor(0.6) = 0: empty, stop.
  REQUIRE(pool.size() == 3);
  for (const CandidateSummary& c : pool) {
    CHECK(c.iteration == 1);
    CHECK(c.sentence_ids == std::vector<int>{0});
  }
}

TEST_CASE("pool persistence round-trips") {
  CandidateSummary a;
  a.set_id = "s1";
  a.sentence_ids = {0, 2};
  a.lambda = 0.3;
  a.iteration = 2;
  a.text = "First line.\nSecond line.";
  CandidateSummary b;
  b.set_id = "s2";
  b.sentence_ids = {1};
  b.lambda = 0.0;
  b.iteration = 1;
  b.text = "Lone line.";
  const auto path = std::filesystem::temp_directory_path() / "sumrank_pool_test.jsonl";
  save_pool({a, b}, path);
  const std::vector<CandidateSummary> loaded = load_pool(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].set_id == "s1");
  CHECK(loaded[0].sentence_ids == a.sentence_ids);
  CHECK(loaded[0].lambda == doctest::Approx(0.3));
  CHECK(loaded[0].iteration == 2);
  CHECK(loaded[0].text == a.text);
  CHECK(loaded[0].source == CandidateSource::kIlp);
  CHECK(loaded[1].set_id == "s2");
  std::filesystem::remove(path);

  CandidateSummary ext = a;
  ext.source = CandidateSource::kExternal;
  CHECK_THROWS_AS(save_pool({ext}, path), DataError);
}

TEST_CASE("external candidate loading validates its input") {
  const auto path =
      std::filesystem::temp_directory_path() / "sumrank_external_test.jsonl";
  {
    std::ofstream out(path);
    out << R"({"set_id":"s1","system_id":"sysA","text":"Alpha beta.\nGamma delta."})"
        << '\n'
        << R"({"set_id":"s2","system_id":"sysA","text":"Epsilon."})" << '\n';
  }
  const std::vector<CandidateSummary> loaded =
      load_external_candidates(path, {"s1", "s2"});
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].source == CandidateSource::kExternal);
  CHECK(loaded[0].system_id == "sysA");
  CHECK(loaded[0].iteration == 0);
  CHECK(loaded[0].sentence_ids.empty());

  // Unknown set id.
  CHECK_THROWS_WITH_AS(load_external_candidates(path, {"s1"}),
                       doctest::Contains("s2"), DataError);

  // Empty text names the system and the set.
  {
    std::ofstream out(path);
    out << R"({"set_id":"s1","system_id":"sysB","text":"..."})" << '\n';
  }
  CHECK_THROWS_WITH_AS(load_external_candidates(path, {"s1"}),
                       doctest::Contains("sysB"), DataError);

  // Duplicate (set, system) pair.
  {
    std::ofstream out(path);
    out << R"({"set_id":"s1","system_id":"sysA","text":"First."})" << '\n'
        << R"({"set_id":"s1","system_id":"sysA","text":"Again."})" << '\n';
  }
  CHECK_THROWS_AS(load_external_candidates(path, {"s1"}), DataError);
  std::filesystem::remove(path);
}

TEST_CASE("default lambdas enumerate tenths") {
  const std::vector<double> lambdas = default_lambdas();
  REQUIRE(lambdas.size() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(lambdas[i] == doctest::Approx(i / 10.0));
  }
}
