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

#ifndef SUMRANK_CORPUS_HPP_
#define SUMRANK_CORPUS_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace sumrank {

// Thrown for any malformed or inconsistent input (corpus files, model files,
// candidate files, ...). The CLI maps it to the data-error exit code.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

enum class PosTag { kNoun, kVerb, kAdjective, kAdverb, kOther, kUnknown };

struct Token {
  std::string surface;          // as it appeared in the text
  std::string lower;            // ASCII case-fold of surface
  PosTag pos = PosTag::kUnknown;  // kUnknown only when no annotation was given
  bool is_named_entity = false;
  bool is_number = false;       // surface matches the numeric pattern
  bool is_stopword = false;     // lower form is on the bundled stopword list
};

struct Sentence {
  int sentence_id = -1;         // unique within the document set
  int doc_id = -1;
  int position = 1;             // 1-based position within its document
  std::string text;             // raw text as provided
  std::vector<Token> tokens;
  int word_length = 0;          // token count
  int byte_length = 0;          // byte count of the raw text
  int subsentence_count = 1;    // 1 + clause separators, clamped to word_length
  int parse_depth = 1;          // annotation, or min(subsentence_count + 2, 10)
};

// Index range [begin, end) of one document's sentences inside
// DocumentSet::sentences.
struct DocumentSpan {
  int doc_id = -1;
  int begin = 0;
  int end = 0;
};

struct WordStats {
  std::string word;                      // lowercased non-stopword type
  int tf = 0;                            // occurrences in the whole set
  int df = 0;                            // documents containing the word
  std::vector<int> containing_sentences; // sorted unique sentence ids
};

struct DocumentSet {
  std::string set_id;
  std::vector<DocumentSpan> documents;
  std::vector<Sentence> sentences;             // flattened, ids 0..n-1
  std::map<std::string, WordStats> vocabulary; // non-stopword lower types
  std::unordered_set<std::string> lead_types;  // lower types in any document's
                                               // first sentence

  int doc_count() const { return static_cast<int>(documents.size()); }

  // 1 - (position-1)/(count-1) within the sentence's document; 1.0 when the
  // document has a single sentence.
  double position_weight(int sentence_id) const;

  const DocumentSpan& document_of(int sentence_id) const;
};

// Tokenized reference summaries for one document set. Each reference keeps
// its sentence boundaries: references[r][s] is the lowercased token list of
// sentence s of reference r.
struct ReferenceSet {
  std::string set_id;
  std::vector<std::vector<std::vector<std::string>>> references;
};

struct Cluster {
  DocumentSet documents;
  std::optional<ReferenceSet> references;
};

// Splits on whitespace and punctuation. Word-internal hyphens, apostrophes,
// periods and commas are kept when flanked by alphanumerics ("state-of-the-art",
// "don't", "u.s.", "1,200"); a trailing period is kept after an abbreviation
// that already contains one ("U.S." -> "u.s."); a leading sign is kept before
// a digit ("-4.5"). Whitespace-only input yields an empty list.
std::vector<Token> tokenize(std::string_view text);

// True iff the lowercased form is on the bundled SMART stopword list.
bool is_stopword_word(std::string_view lower);

// Optional sign, digit groups with commas, at most one decimal point:
// "3", "1,200", "-4.5".
bool is_number_token(std::string_view token);

// The bundled stopword list, lowercased, sorted.
std::span<const std::string_view> stopword_list();

// Populates vocabulary (tf/df/containing_sentences per non-stopword lower
// type) and lead_types. parse_corpus calls this; it is idempotent.
void compute_stats(DocumentSet& ds);

// Reads a JSONL corpus: one cluster per line,
//   {"set_id": "...", "documents": [{"doc_id": 0, "sentences": [
//       {"text": "...", "pos": [...], "ner": [...], "parse_depth": 3}, ...]}],
//    "references": ["sent a\nsent b", ...]}
// pos/ner arrays are per-token and optional; parse_depth is optional.
// References use newline as the sentence separator. Malformed records raise
// DataError naming the line; empty clusters/documents/sentences raise
// DataError naming the cluster.
std::vector<Cluster> parse_corpus(const std::filesystem::path& path);

// Inverse of parse_corpus for round-tripping: writes one JSONL record per
// cluster, preserving text, annotations and references.
void write_corpus(const std::vector<Cluster>& clusters,
                  const std::filesystem::path& path);

}  // namespace sumrank

#endif  // SUMRANK_CORPUS_HPP_
