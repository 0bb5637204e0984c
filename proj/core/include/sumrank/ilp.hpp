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
// Sentence-selection integer program and diverse candidate generation.
//
// The selection problem maximizes
//   lambda * sum_i (l_i / L) * u_i * x_i  +  (1 - lambda) * (1 / L) * sum_j v_j * y_j
// over binary sentence indicators x and word-coverage indicators y, subject
// to the length budget sum_i l_i x_i <= L, the coverage coupling y_j = 1 iff
// some selected sentence contains word j, and optional exclusion caps
// |chosen ∩ X_k| <= cap_k that force successive solutions apart.

#ifndef SUMRANK_ILP_HPP_
#define SUMRANK_ILP_HPP_

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "sumrank/corpus.hpp"
#include "sumrank/importance.hpp"

namespace sumrank {

enum class LengthUnit { kWords, kBytes };

// Cap on how many members of a fixed sentence group may be selected together.
struct ExclusionConstraint {
  std::vector<int> members;  // instance indices, sorted ascending
  int cap = 0;               // max |chosen ∩ members|
};

struct ILPInstance {
  int budget = 0;                  // L > 0
  double lambda = 0.0;             // objective trade-off in [0,1]
  std::vector<int> sentence_ids;   // instance row -> corpus sentence_id
  std::vector<int> lengths;        // l_i in the configured unit
  std::vector<double> u;           // sentence scores, >= 0
  std::vector<double> v;           // word scores, >= 0
  std::vector<std::vector<int>> incidence;  // per row: sorted word indices
  std::vector<std::string> words;  // word index -> lower type
  std::vector<ExclusionConstraint> exclusions;

  std::size_t size() const { return lengths.size(); }
};

struct Selection {
  std::vector<int> chosen;   // instance indices, sorted ascending
  std::vector<int> covered;  // word indices, sorted ascending
  double objective = 0.0;
  int total_length = 0;
  bool proven_optimal = true;  // false only when the optimality proof timed out
};

enum class CandidateSource { kIlp, kExternal };

struct CandidateSummary {
  std::string set_id;
  std::vector<int> sentence_ids;  // corpus sentence ids, document order;
                                  // empty for external candidates until the
                                  // feature stage resolves them by matching
  double lambda = 0.0;
  int iteration = 0;  // 1-based; 0 for external candidates
  std::string text;   // sentences joined with '\n'
  CandidateSource source = CandidateSource::kIlp;
  std::string system_id;  // producing system, external candidates only
};

struct GenerationOptions {
  int budget = 100;
  LengthUnit unit = LengthUnit::kWords;
  double beta = 0.6;   // reuse ratio for the diversity caps
  int per_lambda = 10;
  std::vector<double> lambdas;  // empty -> default_lambdas()
  long long timeout_ms = 0;     // per solve() call; <= 0 means unlimited
};

// {0.0, 0.1, ..., 0.9}
std::vector<double> default_lambdas();

// Scores every sentence and vocabulary word with the trained models and
// assembles the optimization instance. Sentences with no vocabulary word are
// dropped from the instance (they cannot contribute coverage); sentences
// longer than the budget are retained, merely unselectable. Throws DataError
// on untrained models, an empty document set, or budget <= 0. `exclusions`
// are expressed in instance indices of the returned instance.
ILPInstance build_instance(const DocumentSet& ds, const LinearModel& sentence_model,
                           const LinearModel& word_model, double lambda, int budget,
                           LengthUnit unit,
                           std::vector<ExclusionConstraint> exclusions = {});

// Objective value of a chosen set of instance indices, with word coverage
// derived as the union of the chosen rows' incidence lists. Throws DataError
// on out-of-range or duplicate indices.
double objective(const ILPInstance& inst, const std::vector<int>& chosen);

// Exact branch-and-bound maximization. Among equal-objective optima the
// lexicographically smallest chosen index set is returned. If the timeout
// fires before optimality is proven, the best feasible incumbent is returned
// with proven_optimal=false (the empty selection is always feasible); if only
// the tie-break refinement times out the incumbent already attains the
// optimal value and proven_optimal stays true.
Selection solve(const ILPInstance& inst, long long timeout_ms = 0);

// Diverse candidate pool: for every lambda, per_lambda successive solves
// where each solution adds the cap |chosen ∩ X_k| <= floor(beta * |X_k|)
// over the union X_k of all sentences chosen so far for that lambda.
// Constraints accumulate within a lambda and reset across lambdas. A lambda
// stops early only when the solver returns an empty selection; repeated
// solutions are kept so the pool size stays at |lambdas| * per_lambda.
// Output order: lambda ascending, iteration ascending.
std::vector<CandidateSummary> generate_candidates(const DocumentSet& ds,
                                                  const LinearModel& sentence_model,
                                                  const LinearModel& word_model,
                                                  const GenerationOptions& options);

// JSONL pool persistence: {"set_id","lambda","iteration","sentence_ids","text"}.
// Only internally generated candidates may be saved; loading restores
// source=kIlp rows in file order.
void save_pool(const std::vector<CandidateSummary>& pool,
               const std::filesystem::path& path);
std::vector<CandidateSummary> load_pool(const std::filesystem::path& path);

// JSONL external candidates: {"set_id","system_id","text"}. Sentences within
// text are separated by '\n'. Throws DataError on a set_id missing from
// known_set_ids, empty summary text, or a duplicate (set_id, system_id) pair.
std::vector<CandidateSummary> load_external_candidates(
    const std::filesystem::path& path, const std::set<std::string>& known_set_ids);

}  // namespace sumrank

#endif  // SUMRANK_ILP_HPP_
