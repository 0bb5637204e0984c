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

#include "sumrank/ilp.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>

#include <json.hpp>

namespace sumrank {

namespace {

using Clock = std::chrono::steady_clock;

using Mask = std::vector<std::uint64_t>;

void mask_set(Mask& m, int bit) { m[bit >> 6] |= std::uint64_t{1} << (bit & 63); }

// Sum of values over the set bits of a mask.
double mask_value(const Mask& m, const std::vector<double>& values) {
  double sum = 0.0;
  for (std::size_t word = 0; word < m.size(); ++word) {
    std::uint64_t bits = m[word];
    while (bits != 0) {
      const int bit = std::countr_zero(bits);
      sum += values[(word << 6) + bit];
      bits &= bits - 1;
    }
  }
  return sum;
}

std::vector<int> mask_bits(const Mask& m) {
  std::vector<int> bits;
  for (std::size_t word = 0; word < m.size(); ++word) {
    std::uint64_t w = m[word];
    while (w != 0) {
      const int bit = std::countr_zero(w);
      bits.push_back(static_cast<int>((word << 6) + bit));
      w &= w - 1;
    }
  }
  return bits;
}

void validate_instance(const ILPInstance& inst) {
  if (inst.budget <= 0) throw DataError("instance budget must be positive");
  if (inst.lambda < 0.0 || inst.lambda > 1.0) {
    throw DataError("instance lambda must lie in [0,1]");
  }
  const std::size_t n = inst.lengths.size();
  if (inst.u.size() != n || inst.incidence.size() != n ||
      (!inst.sentence_ids.empty() && inst.sentence_ids.size() != n)) {
    throw DataError("instance sentence arrays have inconsistent sizes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (inst.lengths[i] <= 0) throw DataError("instance sentence length must be positive");
    if (inst.u[i] < 0.0) throw DataError("instance sentence scores must be nonnegative");
    for (int j : inst.incidence[i]) {
      if (j < 0 || static_cast<std::size_t>(j) >= inst.v.size()) {
        throw DataError("instance incidence refers to an unknown word index");
      }
    }
  }
  for (double vj : inst.v) {
    if (vj < 0.0) throw DataError("instance word scores must be nonnegative");
  }
  for (const ExclusionConstraint& e : inst.exclusions) {
    for (int i : e.members) {
      if (i < 0 || static_cast<std::size_t>(i) >= n) {
        throw DataError("exclusion constraint refers to an unknown sentence index");
      }
    }
  }
}

// Objective of a duplicate-free ascending index set; no validation.
double objective_sorted(const ILPInstance& inst, const std::vector<int>& chosen) {
  const double budget = inst.budget;
  double sentence_term = 0.0;
  Mask covered((inst.v.size() + 63) / 64, 0);
  for (int i : chosen) {
    sentence_term += inst.lengths[i] / budget * inst.u[i];
    for (int j : inst.incidence[i]) mask_set(covered, j);
  }
  return inst.lambda * sentence_term +
         (1.0 - inst.lambda) / budget * mask_value(covered, inst.v);
}

// Exact maximization engine shared by the optimum search and the
// lexicographic tie-break refinement.
class BranchAndBound {
 public:
  BranchAndBound(const ILPInstance& inst, long long timeout_ms)
      : inst_(inst),
        n_(inst.lengths.size()),
        mask_words_((inst.v.size() + 63) / 64),
        has_deadline_(timeout_ms > 0),
        deadline_(Clock::now() + std::chrono::milliseconds(timeout_ms > 0 ? timeout_ms : 0)) {
    masks_.assign(n_, Mask(mask_words_, 0));
    for (std::size_t i = 0; i < n_; ++i) {
      for (int j : inst.incidence[i]) mask_set(masks_[i], j);
    }
    // Static branch order: standalone objective density, best first.
    std::vector<double> density(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double standalone =
          inst.lambda * inst.lengths[i] / inst.budget * inst.u[i] +
          (1.0 - inst.lambda) / inst.budget * mask_value(masks_[i], inst.v);
      density[i] = standalone / inst.lengths[i];
    }
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return density[a] > density[b]; });
    // Sentence ranking for the fractional-knapsack part of the bound: the
    // per-length value of sentence i is lambda*u_i/L, independent of l_i.
    u_rank_.resize(n_);
    std::iota(u_rank_.begin(), u_rank_.end(), 0);
    std::sort(u_rank_.begin(), u_rank_.end(), [&](int a, int b) {
      if (inst.u[a] != inst.u[b]) return inst.u[a] > inst.u[b];
      return a < b;
    });
    excl_of_.assign(n_, {});
    caps_.reserve(inst.exclusions.size());
    for (std::size_t e = 0; e < inst.exclusions.size(); ++e) {
      caps_.push_back(inst.exclusions[e].cap);
      for (int i : inst.exclusions[e].members) {
        excl_of_[i].push_back(static_cast<int>(e));
      }
    }
    diff_stack_.assign(n_ + 1, Mask(mask_words_, 0));
  }

  bool timed_out() const { return timed_out_; }

  // Exact optimum over all feasible subsets. On timeout returns the best
  // incumbent found so far (timed_out() reports the abort).
  void maximize(std::vector<int>* best_chosen, double* best_value) {
    prepare(/*free_begin=*/0);
    best_chosen_.clear();
    best_value_ = 0.0;  // the empty selection is always feasible
    greedy_warm_start();
    target_.reset();
    dfs(0);
    *best_chosen = best_chosen_;
    std::sort(best_chosen->begin(), best_chosen->end());
    *best_value = best_value_;
  }

  // Decision query: can `forced` plus indices >= free_begin reach `target`?
  // `forced` must be duplicate-free; infeasible forced sets are unreachable.
  bool achievable(const std::vector<int>& forced, int free_begin, double target) {
    prepare(free_begin);
    for (int i : forced) {
      if (!can_include(i)) return false;
      include(i, n_);  // depth slot n_ is reserved for forced rows
    }
    best_value_ = value_;
    best_chosen_ = included_;
    target_ = target;
    found_ = canonical_value() >= target;
    if (!found_) dfs(0);
    return found_;
  }

 private:
  void prepare(int free_begin) {
    covered_.assign(mask_words_, 0);
    excl_count_.assign(caps_.size(), 0);
    included_.clear();
    value_ = 0.0;
    length_ = 0;
    found_ = false;
    branch_rows_.clear();
    for (int r : order_) {
      if (r >= free_begin) branch_rows_.push_back(r);
    }
    pos_of_.assign(n_, -1);
    for (std::size_t p = 0; p < branch_rows_.size(); ++p) {
      pos_of_[branch_rows_[p]] = static_cast<int>(p);
    }
    suffix_.assign(branch_rows_.size() + 1, Mask(mask_words_, 0));
    for (std::size_t p = branch_rows_.size(); p-- > 0;) {
      suffix_[p] = suffix_[p + 1];
      const Mask& m = masks_[branch_rows_[p]];
      for (std::size_t w = 0; w < mask_words_; ++w) suffix_[p][w] |= m[w];
    }
  }

  bool can_include(int r) const {
    if (length_ + inst_.lengths[r] > inst_.budget) return false;
    for (int e : excl_of_[r]) {
      if (excl_count_[e] + 1 > caps_[e]) return false;
    }
    return true;
  }

  void include(int r, std::size_t depth) {
    Mask& diff = diff_stack_[depth];
    double gain = inst_.lambda * inst_.lengths[r] / inst_.budget * inst_.u[r];
    double covered_gain = 0.0;
    for (std::size_t w = 0; w < mask_words_; ++w) {
      diff[w] = masks_[r][w] & ~covered_[w];
      covered_[w] |= diff[w];
    }
    covered_gain = mask_value(diff, inst_.v);
    value_ += gain + (1.0 - inst_.lambda) / inst_.budget * covered_gain;
    length_ += inst_.lengths[r];
    for (int e : excl_of_[r]) ++excl_count_[e];
    included_.push_back(r);
  }

  void undo_include(int r, std::size_t depth, double saved_value) {
    const Mask& diff = diff_stack_[depth];
    for (std::size_t w = 0; w < mask_words_; ++w) covered_[w] &= ~diff[w];
    value_ = saved_value;
    length_ -= inst_.lengths[r];
    for (int e : excl_of_[r]) --excl_count_[e];
    included_.pop_back();
  }

  // Objective of the current included set recomputed in a canonical order,
  // so stored incumbents agree exactly with objective() on the same set.
  double canonical_value() const {
    std::vector<int> sorted = included_;
    std::sort(sorted.begin(), sorted.end());
    return objective_sorted(inst_, sorted);
  }

  // Admissible upper bound for completions of the node at branch position p:
  // full credit for every uncovered word reachable from undecided rows plus a
  // fractional-knapsack relaxation of the sentence term over the remaining
  // budget. Exclusion caps are ignored (relaxation stays admissible).
  double bound(std::size_t p) const {
    double reachable = 0.0;
    const Mask& suffix = suffix_[p];
    for (std::size_t w = 0; w < mask_words_; ++w) {
      std::uint64_t bits = suffix[w] & ~covered_[w];
      while (bits != 0) {
        const int bit = std::countr_zero(bits);
        reachable += inst_.v[(w << 6) + bit];
        bits &= bits - 1;
      }
    }
    double b = value_ + (1.0 - inst_.lambda) / inst_.budget * reachable;
    int remaining = inst_.budget - length_;
    const int pos = static_cast<int>(p);
    for (int r : u_rank_) {
      if (remaining <= 0) break;
      if (pos_of_[r] < pos) continue;  // decided or not branchable here
      const int take = std::min(inst_.lengths[r], remaining);
      b += inst_.lambda * static_cast<double>(take) / inst_.budget * inst_.u[r];
      remaining -= take;
    }
    return b;
  }

  void greedy_warm_start() {
    while (true) {
      int best = -1;
      double best_gain = 0.0;
      for (std::size_t r = 0; r < n_; ++r) {
        if (pos_of_[r] < 0) continue;
        if (std::find(included_.begin(), included_.end(), static_cast<int>(r)) !=
            included_.end()) {
          continue;
        }
        if (!can_include(static_cast<int>(r))) continue;
        double gain = inst_.lambda * inst_.lengths[r] / inst_.budget * inst_.u[r];
        for (std::size_t w = 0; w < mask_words_; ++w) {
          std::uint64_t bits = masks_[r][w] & ~covered_[w];
          while (bits != 0) {
            const int bit = std::countr_zero(bits);
            gain += (1.0 - inst_.lambda) / inst_.budget * inst_.v[(w << 6) + bit];
            bits &= bits - 1;
          }
        }
        if (gain > best_gain + 1e-15) {
          best_gain = gain;
          best = static_cast<int>(r);
        }
      }
      if (best < 0) break;
      include(best, n_);
    }
    const double greedy_value = canonical_value();
    if (greedy_value > best_value_) {
      best_value_ = greedy_value;
      best_chosen_ = included_;
    }
    // Rewind: the warm start only seeds the incumbent.
    covered_.assign(mask_words_, 0);
    excl_count_.assign(caps_.size(), 0);
    included_.clear();
    value_ = 0.0;
    length_ = 0;
  }

  bool deadline_hit() {
    if (!has_deadline_) return false;
    if (++node_counter_ % 1024 != 0) return timed_out_;
    if (Clock::now() > deadline_) timed_out_ = true;
    return timed_out_;
  }

  void dfs(std::size_t p) {
    if (timed_out_ || found_) return;
    if (deadline_hit()) return;
    if (target_.has_value()) {
      if (value_ >= *target_ && canonical_value() >= *target_) {
        found_ = true;
        best_chosen_ = included_;
        return;
      }
    } else if (value_ > best_value_) {
      const double canonical = canonical_value();
      if (canonical > best_value_) {
        best_value_ = canonical;
        best_chosen_ = included_;
      }
    }
    if (p == branch_rows_.size()) return;
    const double b = bound(p);
    if (target_.has_value()) {
      if (b < *target_) return;
    } else if (b <= best_value_ + 1e-12) {
      return;
    }
    const int r = branch_rows_[p];
    if (can_include(r)) {
      const double saved_value = value_;
      include(r, p);
      dfs(p + 1);
      undo_include(r, p, saved_value);
      if (timed_out_ || found_) return;
    }
    dfs(p + 1);
  }

  const ILPInstance& inst_;
  std::size_t n_;
  std::size_t mask_words_;
  bool has_deadline_;
  Clock::time_point deadline_;
  bool timed_out_ = false;
  std::uint64_t node_counter_ = 0;

  std::vector<Mask> masks_;
  std::vector<int> order_;
  std::vector<int> u_rank_;
  std::vector<std::vector<int>> excl_of_;
  std::vector<int> caps_;

  // Per-query state.
  std::vector<int> branch_rows_;
  std::vector<int> pos_of_;
  std::vector<Mask> suffix_;
  std::vector<Mask> diff_stack_;
  Mask covered_;
  std::vector<int> excl_count_;
  std::vector<int> included_;
  double value_ = 0.0;
  int length_ = 0;
  std::optional<double> target_;
  bool found_ = false;
  std::vector<int> best_chosen_;
  double best_value_ = 0.0;
};

Selection make_selection(const ILPInstance& inst, std::vector<int> chosen,
                         bool proven_optimal) {
  std::sort(chosen.begin(), chosen.end());
  Selection sel;
  Mask covered((inst.v.size() + 63) / 64, 0);
  for (int i : chosen) {
    sel.total_length += inst.lengths[i];
    for (int j : inst.incidence[i]) mask_set(covered, j);
  }
  sel.objective = objective_sorted(inst, chosen);
  sel.covered = mask_bits(covered);
  sel.chosen = std::move(chosen);
  sel.proven_optimal = proven_optimal;
  return sel;
}

}  // namespace

std::vector<double> default_lambdas() {
  std::vector<double> lambdas(10);
  for (int i = 0; i < 10; ++i) lambdas[i] = i / 10.0;
  return lambdas;
}

ILPInstance build_instance(const DocumentSet& ds, const LinearModel& sentence_model,
                           const LinearModel& word_model, double lambda, int budget,
                           LengthUnit unit, std::vector<ExclusionConstraint> exclusions) {
  if (ds.sentences.empty()) {
    throw DataError("document set " + ds.set_id + " is empty");
  }
  if (budget <= 0) throw DataError("budget must be positive");
  if (lambda < 0.0 || lambda > 1.0) throw DataError("lambda must lie in [0,1]");
  if (!sentence_model.trained() || !word_model.trained()) {
    throw DataError("importance models must be trained before building instances");
  }

  ILPInstance inst;
  inst.budget = budget;
  inst.lambda = lambda;
  inst.exclusions = std::move(exclusions);

  std::map<std::string, int> word_index;
  inst.words.reserve(ds.vocabulary.size());
  inst.v.reserve(ds.vocabulary.size());
  for (const auto& [word, stats] : ds.vocabulary) {
    word_index.emplace(word, static_cast<int>(inst.words.size()));
    inst.words.push_back(word);
    inst.v.push_back(predict(word_model, word_features(stats, ds)));
  }

  for (const Sentence& s : ds.sentences) {
    std::vector<int> incidence;
    for (const Token& t : s.tokens) {
      auto it = word_index.find(t.lower);
      if (it != word_index.end()) incidence.push_back(it->second);
    }
    std::sort(incidence.begin(), incidence.end());
    incidence.erase(std::unique(incidence.begin(), incidence.end()), incidence.end());
    if (incidence.empty()) continue;  // cannot contribute coverage
    inst.sentence_ids.push_back(s.sentence_id);
    inst.lengths.push_back(unit == LengthUnit::kWords ? s.word_length : s.byte_length);
    inst.u.push_back(predict(sentence_model, sentence_features(s, ds)));
    inst.incidence.push_back(std::move(incidence));
  }
  return inst;
}

double objective(const ILPInstance& inst, const std::vector<int>& chosen) {
  std::vector<int> sorted = chosen;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] < 0 || static_cast<std::size_t>(sorted[k]) >= inst.lengths.size()) {
      throw DataError("chosen set refers to unknown sentence index " +
                      std::to_string(sorted[k]));
    }
    if (k > 0 && sorted[k] == sorted[k - 1]) {
      throw DataError("chosen set contains duplicate sentence index " +
                      std::to_string(sorted[k]));
    }
  }
  return objective_sorted(inst, sorted);
}

Selection solve(const ILPInstance& inst, long long timeout_ms) {
  validate_instance(inst);
  if (inst.lengths.empty()) return Selection{};

  BranchAndBound engine(inst, timeout_ms);
  std::vector<int> incumbent;
  double optimum = 0.0;
  engine.maximize(&incumbent, &optimum);
  if (engine.timed_out()) {
    return make_selection(inst, std::move(incumbent), /*proven_optimal=*/false);
  }

  // Refine to the lexicographically smallest chosen set attaining the
  // optimum: walk indices in ascending order and keep an index exactly when
  // some optimal completion contains it.
  const double target = optimum - 1e-12 * std::max(1.0, std::fabs(optimum));
  std::vector<int> prefix;
  for (int i = 0; i < static_cast<int>(inst.lengths.size()); ++i) {
    if (objective_sorted(inst, prefix) >= target) break;
    std::vector<int> attempt = prefix;
    attempt.push_back(i);
    if (engine.achievable(attempt, i + 1, target)) prefix = std::move(attempt);
    if (engine.timed_out()) {
      // The incumbent already attains the optimal value; only the
      // tie-break refinement was abandoned.
      return make_selection(inst, std::move(incumbent), /*proven_optimal=*/true);
    }
  }
  return make_selection(inst, std::move(prefix), /*proven_optimal=*/true);
}

std::vector<CandidateSummary> generate_candidates(const DocumentSet& ds,
                                                  const LinearModel& sentence_model,
                                                  const LinearModel& word_model,
                                                  const GenerationOptions& options) {
  if (options.per_lambda < 1) throw DataError("per_lambda must be at least 1");
  if (options.beta < 0.0 || options.beta > 1.0) {
    throw DataError("beta must lie in [0,1]");
  }
  const std::vector<double> lambdas =
      options.lambdas.empty() ? default_lambdas() : options.lambdas;

  std::vector<CandidateSummary> pool;
  for (double lambda : lambdas) {
    ILPInstance inst = build_instance(ds, sentence_model, word_model, lambda,
                                      options.budget, options.unit);
    std::vector<int> union_rows;  // X_k as sorted instance indices
    std::set<std::vector<int>> seen;
    std::optional<CandidateSummary> frozen;
    for (int iteration = 1; iteration <= options.per_lambda; ++iteration) {
      if (frozen.has_value()) {
        // A repeated optimum leaves the union and therefore the feasible
        // region unchanged; every later iteration re-yields it.
        CandidateSummary copy = *frozen;
        copy.iteration = iteration;
        pool.push_back(std::move(copy));
        continue;
      }
      const Selection sel = solve(inst, options.timeout_ms);
      if (sel.chosen.empty()) break;

      CandidateSummary cand;
      cand.set_id = ds.set_id;
      cand.lambda = lambda;
      cand.iteration = iteration;
      cand.source = CandidateSource::kIlp;
      std::string text;
      for (int row : sel.chosen) {
        const int sid = inst.sentence_ids[row];
        cand.sentence_ids.push_back(sid);
        if (!text.empty()) text += '\n';
        text += ds.sentences[sid].text;
      }
      cand.text = std::move(text);
      pool.push_back(cand);

      const bool repeat = !seen.insert(sel.chosen).second;
      if (repeat && sel.proven_optimal) {
        frozen = std::move(cand);
        continue;
      }
      std::vector<int> merged;
      std::set_union(union_rows.begin(), union_rows.end(), sel.chosen.begin(),
                     sel.chosen.end(), std::back_inserter(merged));
      union_rows = std::move(merged);
      ExclusionConstraint constraint;
      constraint.members = union_rows;
      constraint.cap =
          static_cast<int>(std::floor(options.beta * union_rows.size()));
      inst.exclusions.push_back(std::move(constraint));
    }
  }
  return pool;
}

void save_pool(const std::vector<CandidateSummary>& pool,
               const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open pool file for writing: " + path.string());
  for (const CandidateSummary& cand : pool) {
    if (cand.source != CandidateSource::kIlp) {
      throw DataError("pool files hold internally generated candidates only");
    }
    nlohmann::json j;
    j["set_id"] = cand.set_id;
    j["lambda"] = cand.lambda;
    j["iteration"] = cand.iteration;
    j["sentence_ids"] = cand.sentence_ids;
    j["text"] = cand.text;
    out << j.dump() << '\n';
  }
}

std::vector<CandidateSummary> load_pool(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pool file: " + path.string());
  std::vector<CandidateSummary> pool;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError("pool file " + path.string() + " line " +
                      std::to_string(line_no) + ": " + e.what());
    }
    try {
      CandidateSummary cand;
      cand.set_id = j.at("set_id").get<std::string>();
      cand.lambda = j.at("lambda").get<double>();
      cand.iteration = j.at("iteration").get<int>();
      cand.sentence_ids = j.at("sentence_ids").get<std::vector<int>>();
      cand.text = j.at("text").get<std::string>();
      cand.source = CandidateSource::kIlp;
      pool.push_back(std::move(cand));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("pool file " + path.string() + " line " +
                      std::to_string(line_no) + ": " + e.what());
    }
  }
  return pool;
}

std::vector<CandidateSummary> load_external_candidates(
    const std::filesystem::path& path, const std::set<std::string>& known_set_ids) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open external candidate file: " + path.string());
  std::vector<CandidateSummary> candidates;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError("external candidate file " + path.string() + " line " +
                      std::to_string(line_no) + ": " + e.what());
    }
    CandidateSummary cand;
    try {
      cand.set_id = j.at("set_id").get<std::string>();
      cand.system_id = j.at("system_id").get<std::string>();
      cand.text = j.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError("external candidate file " + path.string() + " line " +
                      std::to_string(line_no) + ": " + e.what());
    }
    cand.source = CandidateSource::kExternal;
    if (known_set_ids.find(cand.set_id) == known_set_ids.end()) {
      throw DataError("external candidate for unknown set " + cand.set_id +
                      " (system " + cand.system_id + ")");
    }
    if (tokenize(cand.text).empty()) {
      throw DataError("external candidate with empty summary text (system " +
                      cand.system_id + ", set " + cand.set_id + ")");
    }
    if (!seen.emplace(cand.set_id, cand.system_id).second) {
      throw DataError("duplicate external candidate (system " + cand.system_id +
                      ", set " + cand.set_id + ")");
    }
    candidates.push_back(std::move(cand));
  }
  return candidates;
}

}  // namespace sumrank
