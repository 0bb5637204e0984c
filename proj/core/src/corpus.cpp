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

#include "sumrank/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sumrank {

namespace {

using nlohmann::json;

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 ||
         static_cast<unsigned char>(c) >= 0x80;  // pass non-ASCII through
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_internal_separator(char c) {
  return c == '-' || c == '\'' || c == '.' || c == ',';
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

PosTag tag_from_string(std::string_view tag) {
  if (tag.rfind("NN", 0) == 0) return PosTag::kNoun;
  if (tag.rfind("VB", 0) == 0) return PosTag::kVerb;
  if (tag.rfind("JJ", 0) == 0) return PosTag::kAdjective;
  if (tag.rfind("RB", 0) == 0) return PosTag::kAdverb;
  return PosTag::kOther;
}

std::string tag_to_string(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "NN";
    case PosTag::kVerb: return "VB";
    case PosTag::kAdjective: return "JJ";
    case PosTag::kAdverb: return "RB";
    default: return "SYM";
  }
}

// Clause separators counted for subsentence_count: ',', ';', ':' and the
// UTF-8 em dash.
int count_clause_separators(std::string_view text) {
  int count = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == ',' || c == ';' || c == ':') {
      ++count;
    } else if (i + 2 < text.size() && c == '\xe2' && text[i + 1] == '\x80' &&
               text[i + 2] == '\x94') {
      ++count;
      i += 2;
    }
  }
  return count;
}

}  // namespace

bool is_number_token(std::string_view token) {
  std::size_t i = 0;
  if (i < token.size() && (token[i] == '+' || token[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < token.size() && is_digit(token[i])) {
    ++i;
    ++digits;
  }
  if (digits == 0) return false;
  while (i < token.size() && token[i] == ',') {  // groups of exactly 3 digits
    if (i + 3 >= token.size()) return false;
    if (!(is_digit(token[i + 1]) && is_digit(token[i + 2]) && is_digit(token[i + 3]))) {
      return false;
    }
    i += 4;
  }
  if (i < token.size() && token[i] == '.') {
    ++i;
    if (i == token.size()) return false;
    while (i < token.size() && is_digit(token[i])) ++i;
  }
  return i == token.size();
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    const bool sign_start =
        (c == '+' || c == '-') && i + 1 < n && is_digit(text[i + 1]);
    if (!is_word_char(c) && !sign_start) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (sign_start) ++i;
    bool has_inner_dot = false;
    while (i < n) {
      if (is_word_char(text[i])) {
        ++i;
      } else if (is_internal_separator(text[i]) && i > start &&
                 is_word_char(text[i - 1]) && i + 1 < n &&
                 is_word_char(text[i + 1])) {
        has_inner_dot = has_inner_dot || text[i] == '.';
        ++i;
      } else {
        break;
      }
    }
    // Keep the closing period of an abbreviation that already contains one
    // ("U.S." stays one token; "games." drops its period).
    if (has_inner_dot && i < n && text[i] == '.') ++i;

    Token t;
    t.surface = std::string(text.substr(start, i - start));
    t.lower = ascii_lower(t.surface);
    t.is_number = is_number_token(t.surface);
    t.is_stopword = is_stopword_word(t.lower);
    tokens.push_back(std::move(t));
  }
  return tokens;
}

double DocumentSet::position_weight(int sentence_id) const {
  const DocumentSpan& span = document_of(sentence_id);
  const int count = span.end - span.begin;
  if (count <= 1) return 1.0;
  const int position = sentences[sentence_id].position;
  return 1.0 - static_cast<double>(position - 1) / static_cast<double>(count - 1);
}

const DocumentSpan& DocumentSet::document_of(int sentence_id) const {
  for (const DocumentSpan& span : documents) {
    if (sentence_id >= span.begin && sentence_id < span.end) return span;
  }
  throw std::out_of_range("sentence id " + std::to_string(sentence_id) +
                          " not in document set " + set_id);
}

void compute_stats(DocumentSet& ds) {
  ds.vocabulary.clear();
  ds.lead_types.clear();
  for (const Sentence& s : ds.sentences) {
    for (const Token& t : s.tokens) {
      if (t.is_stopword) continue;
      WordStats& stats = ds.vocabulary[t.lower];
      stats.word = t.lower;
      ++stats.tf;
      if (stats.containing_sentences.empty() ||
          stats.containing_sentences.back() != s.sentence_id) {
        stats.containing_sentences.push_back(s.sentence_id);
      }
    }
  }
  for (auto& [word, stats] : ds.vocabulary) {
    int df = 0;
    auto it = stats.containing_sentences.begin();
    for (const DocumentSpan& span : ds.documents) {
      bool in_doc = false;
      while (it != stats.containing_sentences.end() && *it < span.end) {
        in_doc = true;
        ++it;
      }
      if (in_doc) ++df;
    }
    stats.df = df;
  }
  for (const DocumentSpan& span : ds.documents) {
    if (span.begin == span.end) continue;
    for (const Token& t : ds.sentences[span.begin].tokens) {
      ds.lead_types.insert(t.lower);
    }
  }
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw DataError(where + ": " + what);
}

bool ner_flag_from_json(const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number()) return v.get<double>() != 0.0;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    return !(s.empty() || s == "O" || s == "0");
  }
  return false;
}

Sentence parse_sentence(const json& js, const std::string& where) {
  if (!js.is_object() || !js.contains("text") || !js["text"].is_string()) {
    fail(where, "sentence must be an object with a \"text\" string");
  }
  Sentence s;
  s.text = js["text"].get<std::string>();
  s.tokens = tokenize(s.text);
  if (s.tokens.empty()) fail(where, "sentence has no tokens: \"" + s.text + "\"");
  s.word_length = static_cast<int>(s.tokens.size());
  s.byte_length = static_cast<int>(s.text.size());
  s.subsentence_count =
      std::clamp(1 + count_clause_separators(s.text), 1, s.word_length);

  if (js.contains("pos")) {
    const json& pos = js["pos"];
    if (!pos.is_array() || pos.size() != s.tokens.size()) {
      fail(where, "pos annotation count does not match token count");
    }
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (!pos[i].is_string()) fail(where, "pos tags must be strings");
      s.tokens[i].pos = tag_from_string(pos[i].get<std::string>());
    }
  }
  if (js.contains("ner")) {
    const json& ner = js["ner"];
    if (!ner.is_array() || ner.size() != s.tokens.size()) {
      fail(where, "ner annotation count does not match token count");
    }
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      s.tokens[i].is_named_entity = ner_flag_from_json(ner[i]);
    }
  }
  if (js.contains("parse_depth")) {
    if (!js["parse_depth"].is_number_integer() || js["parse_depth"].get<int>() < 1) {
      fail(where, "parse_depth must be an integer >= 1");
    }
    s.parse_depth = js["parse_depth"].get<int>();
  } else {
    s.parse_depth = std::min(s.subsentence_count + 2, 10);
  }
  return s;
}

std::vector<std::vector<std::string>> parse_reference(const std::string& text,
                                                      const std::string& where) {
  std::vector<std::vector<std::string>> sentences;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view segment(text.data() + start, end - start);
    std::vector<Token> tokens = tokenize(segment);
    if (!tokens.empty()) {
      std::vector<std::string> lowered;
      lowered.reserve(tokens.size());
      for (Token& t : tokens) lowered.push_back(std::move(t.lower));
      sentences.push_back(std::move(lowered));
    }
    start = end + 1;
  }
  if (sentences.empty()) fail(where, "reference summary has no tokens");
  return sentences;
}

Cluster parse_cluster(const json& record, int line_no) {
  const std::string line_where = "corpus line " + std::to_string(line_no);
  if (!record.is_object() || !record.contains("set_id") ||
      !record["set_id"].is_string()) {
    fail(line_where, "record must be an object with a \"set_id\" string");
  }
  Cluster cluster;
  DocumentSet& ds = cluster.documents;
  ds.set_id = record["set_id"].get<std::string>();
  const std::string where = "cluster " + ds.set_id;

  if (!record.contains("documents") || !record["documents"].is_array() ||
      record["documents"].empty()) {
    fail(where, "cluster must contain a non-empty \"documents\" array");
  }
  std::set<int> seen_doc_ids;
  for (const json& doc : record["documents"]) {
    if (!doc.is_object() || !doc.contains("doc_id") ||
        !doc["doc_id"].is_number_integer()) {
      fail(where, "document must be an object with an integer \"doc_id\"");
    }
    const int doc_id = doc["doc_id"].get<int>();
    if (!seen_doc_ids.insert(doc_id).second) {
      fail(where, "duplicate doc_id " + std::to_string(doc_id));
    }
    if (!doc.contains("sentences") || !doc["sentences"].is_array() ||
        doc["sentences"].empty()) {
      fail(where, "document " + std::to_string(doc_id) + " has no sentences");
    }
    DocumentSpan span;
    span.doc_id = doc_id;
    span.begin = static_cast<int>(ds.sentences.size());
    int position = 1;
    for (const json& js : doc["sentences"]) {
      Sentence s = parse_sentence(
          js, where + " doc " + std::to_string(doc_id) + " sentence " +
                  std::to_string(position));
      s.sentence_id = static_cast<int>(ds.sentences.size());
      s.doc_id = doc_id;
      s.position = position++;
      ds.sentences.push_back(std::move(s));
    }
    span.end = static_cast<int>(ds.sentences.size());
    ds.documents.push_back(span);
  }
  compute_stats(ds);

  if (record.contains("references")) {
    if (!record["references"].is_array()) {
      fail(where, "\"references\" must be an array of strings");
    }
    ReferenceSet refs;
    refs.set_id = ds.set_id;
    int index = 0;
    for (const json& r : record["references"]) {
      if (!r.is_string()) fail(where, "\"references\" must be an array of strings");
      refs.references.push_back(parse_reference(
          r.get<std::string>(),
          where + " reference " + std::to_string(index)));
      ++index;
    }
    if (!refs.references.empty()) cluster.references = std::move(refs);
  }
  return cluster;
}

}  // namespace

std::vector<Cluster> parse_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path.string());
  std::vector<Cluster> clusters;
  std::set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError("corpus line " + std::to_string(line_no) +
                      ": JSON parse error: " + e.what());
    }
    Cluster cluster = parse_cluster(record, line_no);
    if (!seen_ids.insert(cluster.documents.set_id).second) {
      throw DataError("corpus line " + std::to_string(line_no) +
                      ": duplicate set_id " + cluster.documents.set_id);
    }
    clusters.push_back(std::move(cluster));
  }
  if (clusters.empty()) throw DataError("corpus file is empty: " + path.string());
  return clusters;
}

void write_corpus(const std::vector<Cluster>& clusters,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path.string());
  for (const Cluster& cluster : clusters) {
    const DocumentSet& ds = cluster.documents;
    json record;
    record["set_id"] = ds.set_id;
    json docs = json::array();
    for (const DocumentSpan& span : ds.documents) {
      json doc;
      doc["doc_id"] = span.doc_id;
      json sentences = json::array();
      for (int i = span.begin; i < span.end; ++i) {
        const Sentence& s = ds.sentences[i];
        json js;
        js["text"] = s.text;
        js["parse_depth"] = s.parse_depth;
        const bool any_pos = std::any_of(
            s.tokens.begin(), s.tokens.end(),
            [](const Token& t) { return t.pos != PosTag::kUnknown; });
        if (any_pos) {
          json pos = json::array();
          for (const Token& t : s.tokens) pos.push_back(tag_to_string(t.pos));
          js["pos"] = std::move(pos);
        }
        const bool any_ner = std::any_of(
            s.tokens.begin(), s.tokens.end(),
            [](const Token& t) { return t.is_named_entity; });
        if (any_ner) {
          json ner = json::array();
          for (const Token& t : s.tokens) ner.push_back(t.is_named_entity);
          js["ner"] = std::move(ner);
        }
        sentences.push_back(std::move(js));
      }
      doc["sentences"] = std::move(sentences);
      docs.push_back(std::move(doc));
    }
    record["documents"] = std::move(docs);
    if (cluster.references) {
      json refs = json::array();
      for (const auto& reference : cluster.references->references) {
        std::string text;
        for (std::size_t s = 0; s < reference.size(); ++s) {
          if (s > 0) text += '\n';
          for (std::size_t t = 0; t < reference[s].size(); ++t) {
            if (t > 0) text += ' ';
            text += reference[s][t];
          }
        }
        refs.push_back(std::move(text));
      }
      record["references"] = std::move(refs);
    }
    out << record.dump() << '\n';
  }
}

}  // namespace sumrank
