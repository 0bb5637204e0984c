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

#include "sumrank/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sumrank/rerank_features.hpp"

namespace sumrank {

std::string model_key(const CandidateSummary& c) {
  if (c.source == CandidateSource::kExternal) return c.system_id;
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "lambda=%.2f,it=%02d", c.lambda, c.iteration);
  return buffer;
}

double candidate_rouge2(const CandidateSummary& c, const DocumentSet& ds,
                        const ReferenceSet& refs) {
  const ResolvedCandidate resolved = resolve_candidate(c, ds);
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(resolved.sentences.size());
  for (const auto& sentence : resolved.sentences) {
    std::vector<std::string> lowers;
    lowers.reserve(sentence.size());
    for (const Token& t : sentence) lowers.push_back(t.lower);
    sentences.push_back(std::move(lowers));
  }
  return rouge2_recall(sentences, refs);
}

ScoreMatrix build_score_matrix(const std::vector<CandidateSummary>& pool,
                               const std::vector<Cluster>& corpus) {
  if (pool.empty()) throw DataError("cannot score an empty candidate pool");
  const CandidateSource source = pool.front().source;

  std::map<std::string, const Cluster*> by_id;
  for (const Cluster& cluster : corpus) {
    by_id.emplace(cluster.documents.set_id, &cluster);
  }

  ScoreMatrix matrix;
  std::set<std::string> all_keys;
  for (const CandidateSummary& c : pool) {
    if (c.source != source) {
      throw DataError("candidate pool mixes internal and external sources");
    }
    auto it = by_id.find(c.set_id);
    if (it == by_id.end()) {
      throw DataError("candidate pool references unknown set " + c.set_id);
    }
    const Cluster& cluster = *it->second;
    if (!cluster.references.has_value()) {
      throw DataError("set " + c.set_id + " has no reference summaries");
    }
    const std::string key = model_key(c);
    auto [cell, inserted] = matrix[c.set_id].emplace(key, 0.0);
    if (!inserted) {
      throw DataError("duplicate model key " + key + " in set " + c.set_id);
    }
    cell->second = candidate_rouge2(c, cluster.documents, *cluster.references);
    all_keys.insert(key);
  }

  if (source == CandidateSource::kIlp) {
    // A lambda that stopped early leaves holes in the grid; an absent
    // candidate scores nothing.
    for (auto& [set_id, row] : matrix) {
      for (const std::string& key : all_keys) row.emplace(key, 0.0);
    }
  } else {
    std::set<std::string> complete = all_keys;
    for (const auto& [set_id, row] : matrix) {
      for (const std::string& key : all_keys) {
        if (row.find(key) == row.end()) complete.erase(key);
      }
    }
    for (const std::string& key : all_keys) {
      if (complete.find(key) == complete.end()) {
        std::cerr << "warning: system " << key
                  << " does not cover every set; excluded from the report\n";
      }
    }
    if (complete.empty()) {
      throw DataError("no external system covers every set");
    }
    for (auto& [set_id, row] : matrix) {
      for (auto it = row.begin(); it != row.end();) {
        if (complete.find(it->first) == complete.end()) {
          it = row.erase(it);
        } else {
          ++it;
        }
      }
    }
  }
  return matrix;
}

EvaluationReport build_report(const ScoreMatrix& per_set,
                              const std::map<std::string, double>& selection_scores) {
  if (per_set.empty()) throw DataError("cannot report on an empty score matrix");
  const std::map<std::string, double>& first_row = per_set.begin()->second;
  if (first_row.empty()) throw DataError("score matrix has an empty set row");

  EvaluationReport report;
  report.per_set = per_set;

  std::map<std::string, double> model_sums;
  double flat_sum = 0.0;
  double max_sum = 0.0;
  for (const auto& [set_id, row] : per_set) {
    if (row.size() != first_row.size()) {
      throw DataError("score matrix is ragged at set " + set_id);
    }
    double row_max = 0.0;
    bool first = true;
    for (const auto& [key, value] : row) {
      if (first_row.find(key) == first_row.end()) {
        throw DataError("score matrix is ragged at set " + set_id);
      }
      if (first || value > row_max) row_max = value;
      first = false;
      model_sums[key] += value;
      flat_sum += value;
    }
    max_sum += row_max;
  }

  const double set_count = static_cast<double>(per_set.size());
  const double cell_count = set_count * static_cast<double>(first_row.size());
  report.upper_bound = max_sum / set_count;
  report.average = flat_sum / cell_count;

  bool first = true;
  for (const auto& [key, sum] : model_sums) {
    const double mean = sum / set_count;
    if (first || mean > report.best_model.mean) {
      report.best_model = {key, mean};  // ties keep the first key
    }
    if (first || mean <= report.worst_model.mean) {
      report.worst_model = {key, mean};  // ties keep the last key
    }
    first = false;
  }

  if (!selection_scores.empty()) {
    double sum = 0.0;
    for (const auto& [set_id, row] : per_set) {
      auto it = selection_scores.find(set_id);
      if (it == selection_scores.end()) {
        throw DataError("no selection score for set " + set_id);
      }
      sum += it->second;
    }
    report.approach = sum / set_count;
  }
  return report;
}

namespace {

std::string percent(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", value * 100.0);
  return buffer;
}

}  // namespace

std::string render_report(const EvaluationReport& report) {
  const std::size_t sets = report.per_set.size();
  const std::size_t models =
      sets == 0 ? 0 : report.per_set.begin()->second.size();
  std::ostringstream out;
  out << "sets: " << sets << "  models: " << models << '\n';
  if (report.approach.has_value()) {
    out << "approach     " << percent(*report.approach) << '\n';
  }
  out << "upper bound  " << percent(report.upper_bound) << '\n';
  out << "best         " << percent(report.best_model.mean) << "  ("
      << report.best_model.key << ")\n";
  out << "average      " << percent(report.average) << '\n';
  out << "worst        " << percent(report.worst_model.mean) << "  ("
      << report.worst_model.key << ")\n";
  return out.str();
}

void save_report(const EvaluationReport& report, const std::filesystem::path& path) {
  nlohmann::json j;
  for (const auto& [set_id, row] : report.per_set) {
    for (const auto& [key, value] : row) {
      j["per_set"][set_id][key] = value;
    }
  }
  j["upper_bound"] = report.upper_bound;
  j["average"] = report.average;
  j["best"]["model"] = report.best_model.key;
  j["best"]["mean"] = report.best_model.mean;
  j["worst"]["model"] = report.worst_model.key;
  j["worst"]["mean"] = report.worst_model.mean;
  if (report.approach.has_value()) j["approach"] = *report.approach;
  std::ofstream out(path);
  if (!out) throw DataError("cannot open report file for writing: " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace sumrank
