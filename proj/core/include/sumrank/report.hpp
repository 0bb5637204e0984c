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
// Evaluation report over a candidate pool: a per-set score matrix plus the
// aggregate rows (worst model, average, best model, upper bound, approach).

#ifndef SUMRANK_REPORT_HPP_
#define SUMRANK_REPORT_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sumrank/corpus.hpp"
#include "sumrank/ilp.hpp"
#include "sumrank/rouge.hpp"

namespace sumrank {

// Stable identifier of a pool slot: "lambda=%.2f,it=%02d" for internally
// generated candidates, the system id for external ones.
std::string model_key(const CandidateSummary& c);

// Bigram recall of one candidate against a reference set, in [0,1].
double candidate_rouge2(const CandidateSummary& c, const DocumentSet& ds,
                        const ReferenceSet& refs);

using ScoreMatrix = std::map<std::string, std::map<std::string, double>>;

// Per-set, per-model score matrix of a pool. Every evaluated set needs
// references (DataError otherwise). Internally generated pools score a fixed
// model-key grid: keys missing from a set (an early-stopped lambda) are
// filled with 0. External pools drop systems that do not cover every set,
// with a warning to stderr; mixing the two candidate sources is an error.
ScoreMatrix build_score_matrix(const std::vector<CandidateSummary>& pool,
                               const std::vector<Cluster>& corpus);

struct ModelMean {
  std::string key;
  double mean = 0.0;
};

struct EvaluationReport {
  ScoreMatrix per_set;            // internal fractions in [0,1]
  double upper_bound = 0.0;       // mean over sets of the per-set maximum
  double average = 0.0;           // mean over every (set, model) cell
  ModelMean best_model;           // highest per-model mean; ties -> first key
  ModelMean worst_model;          // lowest per-model mean; ties -> last key
  std::optional<double> approach; // mean score of the selected summaries
};

// Aggregates a complete matrix (every set maps the same model keys). The
// optional per-set selection scores feed the approach row: their mean over
// the matrix's sets. Throws DataError on an empty or ragged matrix.
EvaluationReport build_report(const ScoreMatrix& per_set,
                              const std::map<std::string, double>& selection_scores = {});

// Human-readable table; scores printed as percentages with 3 decimals.
std::string render_report(const EvaluationReport& report);

// Machine-readable JSON, matching the field names above.
void save_report(const EvaluationReport& report, const std::filesystem::path& path);

}  // namespace sumrank

#endif  // SUMRANK_REPORT_HPP_
