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
// Candidate-summary feature extraction: an 11-dim word block, a 6-dim
// sentence block, and a 6-dim summary block, min-max scaled to [0,1].

#ifndef SUMRANK_RERANK_FEATURES_HPP_
#define SUMRANK_RERANK_FEATURES_HPP_

#include <array>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "sumrank/corpus.hpp"
#include "sumrank/ilp.hpp"

namespace sumrank {

inline constexpr int kWordBlockDim = 11;
inline constexpr int kSentenceBlockDim = 6;
inline constexpr int kSummaryBlockDim = 6;
inline constexpr int kRerankFeatureDim =
    kWordBlockDim + kSentenceBlockDim + kSummaryBlockDim;
inline constexpr const char kRerankFeatureSchema[] = "rerank-features/23/v1";

// Column names, block order fixed: word block, sentence block, summary block.
extern const std::array<const char*, kRerankFeatureDim> kRerankFeatureNames;

struct SummaryFeatures {
  std::string schema_id;
  std::vector<double> word_level;      // 11 dims
  std::vector<double> sentence_level;  // 6 dims
  std::vector<double> summary_level;   // 6 dims

  std::vector<double> concat() const;  // 23 dims in block order
};

struct EmbeddingTable {
  int dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
};

// Plain-text embeddings, one line per word: the word followed by `dim`
// whitespace-separated decimals. Throws DataError on unreadable files,
// inconsistent dimensions, malformed numbers, or duplicate words.
EmbeddingTable load_embeddings(const std::filesystem::path& path);

// A candidate mapped back onto concrete sentences. Internally generated
// candidates resolve through their sentence ids; external candidates split
// their text on '\n', tokenize each line, and look up the position weight of
// the first document-set sentence with the identical lower-token sequence
// (unmatched sentences get the neutral weight 0.5).
struct ResolvedCandidate {
  std::vector<std::vector<Token>> sentences;
  std::vector<double> position_weights;  // one per sentence
  std::vector<Token> tokens;             // flattened, sentence order
};

ResolvedCandidate resolve_candidate(const CandidateSummary& c, const DocumentSet& ds);

// Word block: [0] sum of set-level tf over summary tokens, [1] sum of
// set-level df, [2..5] proportions of noun/verb/adverb/adjective tokens,
// [6] named-entity ratio, [7] stopword ratio, [8] number ratio, [9] distinct
// lower types / token count, [10] share of tokens whose type occurs in the
// first sentence of some document. Ratios use token counts. Throws DataError
// on an empty summary.
std::vector<double> word_level(const CandidateSummary& c, const DocumentSet& ds);

// Sentence block: [0..2] min/max/mean sentence token count, [3..4] mean/max
// position weight 1 - (position-1)/(doc sentence count-1) (1.0 for
// single-sentence documents), [5] sentence count.
std::vector<double> sentence_level(const CandidateSummary& c, const DocumentSet& ds);

// Summary block: [0] cosine of tf·idf vectors over non-stopword types
// against the concatenated document set, idf = ln((N+1)/(df+1)) + 1 with N
// the number of documents; [1] Jensen-Shannon divergence against the
// document text (Lidstone alpha=0.001, natural log, stopwords included);
// [2] Jaccard overlap of non-stopword types with the document set; [3] cosine
// of mean word embeddings mapped by (cos+1)/2, 0 when either side has no
// in-vocabulary word; [4] mean Jaccard against every other pool candidate;
// [5] mean mapped embedding cosine against every other pool candidate.
// Dims 4 and 5 are 0 for a pool of size one; dims 3 and 5 are 0 when emb is
// null. The candidate under scrutiny is pool[pool_index].
std::vector<double> summary_level(const std::vector<CandidateSummary>& pool,
                                  std::size_t pool_index, const DocumentSet& ds,
                                  const EmbeddingTable* emb);

// All three blocks for every candidate of one document set's pool; document
// statistics and per-candidate summaries are computed once.
std::vector<SummaryFeatures> extract_pool_features(
    const std::vector<CandidateSummary>& pool, const DocumentSet& ds,
    const EmbeddingTable* emb);

struct FeatureScaler {
  std::vector<double> min;
  std::vector<double> max;
};

// Per-dimension min-max over the training pool. Throws DataError on empty
// input. apply_scaler maps constant dimensions to 0 and clamps to [0,1].
FeatureScaler fit_scaler(const std::vector<SummaryFeatures>& all_features);
SummaryFeatures apply_scaler(const FeatureScaler& scaler, const SummaryFeatures& f);

// One extracted candidate row of the feature dump.
struct FeatureRecord {
  std::string set_id;
  std::string system_id;  // empty for internally generated candidates
  double lambda = 0.0;
  int iteration = 0;
  CandidateSource source = CandidateSource::kIlp;
  double label = 0.0;  // candidate quality in [0,1]
  SummaryFeatures features;  // raw (unscaled)
};

// CSV dump: a "#schema <id>" comment line, a header row, then one row per
// record with full-precision decimals (round-trips exactly).
void save_features_csv(const std::vector<FeatureRecord>& records,
                       const std::filesystem::path& path);
std::vector<FeatureRecord> load_features_csv(const std::filesystem::path& path);

}  // namespace sumrank

#endif  // SUMRANK_RERANK_FEATURES_HPP_
