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

#include "sumrank/rerank_features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sumrank/text_similarity.hpp"

namespace sumrank {

const std::array<const char*, kRerankFeatureDim> kRerankFeatureNames = {
    "wl_tf_sum",    "wl_df_sum",   "wl_noun",     "wl_verb",
    "wl_adverb",    "wl_adjective", "wl_entity",  "wl_stopword",
    "wl_number",    "wl_unique",   "wl_lead",
    "sl_len_min",   "sl_len_max",  "sl_len_mean", "sl_pos_mean",
    "sl_pos_max",   "sl_count",
    "su_tfidf_cos", "su_js",       "su_jaccard",  "su_emb_cos",
    "su_pool_jaccard", "su_pool_emb",
};

std::vector<double> SummaryFeatures::concat() const {
  std::vector<double> all;
  all.reserve(kRerankFeatureDim);
  all.insert(all.end(), word_level.begin(), word_level.end());
  all.insert(all.end(), sentence_level.begin(), sentence_level.end());
  all.insert(all.end(), summary_level.begin(), summary_level.end());
  return all;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path.string());
  EmbeddingTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream stream(line);
    std::string word;
    stream >> word;
    std::vector<double> vec;
    double value;
    while (stream >> value) vec.push_back(value);
    if (word.empty() || vec.empty() || !stream.eof()) {
      throw DataError("embedding file " + path.string() + " line " +
                      std::to_string(line_no) + ": malformed entry");
    }
    if (table.dim == 0) {
      table.dim = static_cast<int>(vec.size());
    } else if (static_cast<int>(vec.size()) != table.dim) {
      throw DataError("embedding file " + path.string() + " line " +
                      std::to_string(line_no) + ": expected " +
                      std::to_string(table.dim) + " values, got " +
                      std::to_string(vec.size()));
    }
    if (!table.vectors.emplace(word, std::move(vec)).second) {
      throw DataError("embedding file " + path.string() + " line " +
                      std::to_string(line_no) + ": duplicate word " + word);
    }
  }
  return table;
}

ResolvedCandidate resolve_candidate(const CandidateSummary& c, const DocumentSet& ds) {
  ResolvedCandidate r;
  if (c.source == CandidateSource::kIlp) {
    for (int sid : c.sentence_ids) {
      if (sid < 0 || static_cast<std::size_t>(sid) >= ds.sentences.size()) {
        throw DataError("candidate in set " + c.set_id +
                        " references unknown sentence id " + std::to_string(sid));
      }
      r.sentences.push_back(ds.sentences[sid].tokens);
      r.position_weights.push_back(ds.position_weight(sid));
    }
  } else {
    std::map<std::vector<std::string>, int> by_lower_seq;
    for (const Sentence& s : ds.sentences) {
      std::vector<std::string> key;
      key.reserve(s.tokens.size());
      for (const Token& t : s.tokens) key.push_back(t.lower);
      by_lower_seq.emplace(std::move(key), s.sentence_id);  // first id wins
    }
    std::istringstream lines(c.text);
    std::string line;
    while (std::getline(lines, line)) {
      std::vector<Token> tokens = tokenize(line);
      if (tokens.empty()) continue;
      std::vector<std::string> key;
      key.reserve(tokens.size());
      for (const Token& t : tokens) key.push_back(t.lower);
      auto it = by_lower_seq.find(key);
      r.position_weights.push_back(it == by_lower_seq.end()
                                       ? 0.5
                                       : ds.position_weight(it->second));
      r.sentences.push_back(std::move(tokens));
    }
  }
  for (const auto& sentence : r.sentences) {
    r.tokens.insert(r.tokens.end(), sentence.begin(), sentence.end());
  }
  if (r.tokens.empty()) {
    throw DataError("candidate in set " + c.set_id + " has an empty summary");
  }
  return r;
}

namespace {

std::vector<double> word_block(const ResolvedCandidate& r, const DocumentSet& ds) {
  std::vector<double> f(kWordBlockDim, 0.0);
  const double total = static_cast<double>(r.tokens.size());
  int noun = 0, verb = 0, adverb = 0, adjective = 0, entity = 0;
  int stop = 0, number = 0, lead = 0;
  std::set<std::string> types;
  for (const Token& t : r.tokens) {
    auto it = ds.vocabulary.find(t.lower);
    if (it != ds.vocabulary.end()) {
      f[0] += it->second.tf;
      f[1] += it->second.df;
    }
    switch (t.pos) {
      case PosTag::kNoun: ++noun; break;
      case PosTag::kVerb: ++verb; break;
      case PosTag::kAdverb: ++adverb; break;
      case PosTag::kAdjective: ++adjective; break;
      default: break;
    }
    if (t.is_named_entity) ++entity;
    if (t.is_stopword) ++stop;
    if (t.is_number) ++number;
    if (ds.lead_types.count(t.lower) > 0) ++lead;
    types.insert(t.lower);
  }
  f[2] = noun / total;
  f[3] = verb / total;
  f[4] = adverb / total;
  f[5] = adjective / total;
  f[6] = entity / total;
  f[7] = stop / total;
  f[8] = number / total;
  f[9] = types.size() / total;
  f[10] = lead / total;
  return f;
}

std::vector<double> sentence_block(const ResolvedCandidate& r) {
  std::vector<double> f(kSentenceBlockDim, 0.0);
  double len_min = 0.0, len_max = 0.0, len_sum = 0.0;
  double pos_max = 0.0, pos_sum = 0.0;
  for (std::size_t i = 0; i < r.sentences.size(); ++i) {
    const double len = static_cast<double>(r.sentences[i].size());
    if (i == 0 || len < len_min) len_min = len;
    len_max = std::max(len_max, len);
    len_sum += len;
    pos_max = std::max(pos_max, r.position_weights[i]);
    pos_sum += r.position_weights[i];
  }
  const double count = static_cast<double>(r.sentences.size());
  f[0] = len_min;
  f[1] = len_max;
  f[2] = len_sum / count;
  f[3] = pos_sum / count;
  f[4] = pos_max;
  f[5] = count;
  return f;
}

double dense_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

// Text representations a summary or document side needs for the summary
// block: raw counts for the divergence, non-stopword types for the overlap,
// a tf·idf vector, and the mean embedding.
struct TextProfile {
  CountMap counts;                      // all tokens, stopwords included
  std::set<std::string> types;          // non-stopword lower types
  std::map<std::string, double> tfidf;  // non-stopword type -> tf * idf
  std::vector<double> mean_embedding;   // empty when no word is covered
};

double idf_weight(const DocumentSet& ds, const std::string& word) {
  auto it = ds.vocabulary.find(word);
  const int df = it == ds.vocabulary.end() ? 0 : it->second.df;
  return std::log((ds.doc_count() + 1.0) / (df + 1.0)) + 1.0;
}

template <typename TokenRange>
TextProfile build_profile(const TokenRange& tokens, const DocumentSet& ds,
                          const EmbeddingTable* emb) {
  TextProfile p;
  std::vector<double> sum;
  int covered = 0;
  for (const Token& t : tokens) {
    ++p.counts[t.lower];
    if (!t.is_stopword) p.types.insert(t.lower);
    if (emb != nullptr) {
      auto it = emb->vectors.find(t.lower);
      if (it != emb->vectors.end()) {
        if (sum.empty()) sum.assign(emb->dim, 0.0);
        for (int d = 0; d < emb->dim; ++d) sum[d] += it->second[d];
        ++covered;
      }
    }
  }
  for (const std::string& type : p.types) {
    p.tfidf[type] = p.counts.at(type) * idf_weight(ds, type);
  }
  if (covered > 0) {
    p.mean_embedding.resize(sum.size());
    for (std::size_t d = 0; d < sum.size(); ++d) {
      p.mean_embedding[d] = sum[d] / covered;
    }
  }
  return p;
}

TextProfile build_document_profile(const DocumentSet& ds, const EmbeddingTable* emb) {
  std::vector<Token> all;
  for (const Sentence& s : ds.sentences) {
    all.insert(all.end(), s.tokens.begin(), s.tokens.end());
  }
  return build_profile(all, ds, emb);
}

double mapped_embedding_cosine(const TextProfile& a, const TextProfile& b,
                               const EmbeddingTable* emb) {
  if (emb == nullptr || a.mean_embedding.empty() || b.mean_embedding.empty()) {
    return 0.0;
  }
  return (dense_cosine(a.mean_embedding, b.mean_embedding) + 1.0) / 2.0;
}

std::vector<double> summary_block(const TextProfile& cand,
                                  const TextProfile& doc,
                                  const std::vector<TextProfile>& pool_profiles,
                                  std::size_t pool_index,
                                  const EmbeddingTable* emb) {
  std::vector<double> f(kSummaryBlockDim, 0.0);
  f[0] = cosine_similarity(cand.tfidf, doc.tfidf);
  f[1] = js_divergence(cand.counts, doc.counts);
  f[2] = jaccard_similarity(cand.types, doc.types);
  f[3] = mapped_embedding_cosine(cand, doc, emb);
  if (pool_profiles.size() > 1) {
    double jaccard_sum = 0.0, emb_sum = 0.0;
    for (std::size_t k = 0; k < pool_profiles.size(); ++k) {
      if (k == pool_index) continue;
      jaccard_sum += jaccard_similarity(cand.types, pool_profiles[k].types);
      emb_sum += mapped_embedding_cosine(cand, pool_profiles[k], emb);
    }
    const double others = static_cast<double>(pool_profiles.size() - 1);
    f[4] = jaccard_sum / others;
    f[5] = emb_sum / others;
  }
  return f;
}

}  // namespace

std::vector<double> word_level(const CandidateSummary& c, const DocumentSet& ds) {
  return word_block(resolve_candidate(c, ds), ds);
}

std::vector<double> sentence_level(const CandidateSummary& c, const DocumentSet& ds) {
  return sentence_block(resolve_candidate(c, ds));
}

std::vector<double> summary_level(const std::vector<CandidateSummary>& pool,
                                  std::size_t pool_index, const DocumentSet& ds,
                                  const EmbeddingTable* emb) {
  if (pool_index >= pool.size()) {
    throw DataError("pool index out of range");
  }
  const TextProfile doc = build_document_profile(ds, emb);
  std::vector<TextProfile> profiles;
  profiles.reserve(pool.size());
  for (const CandidateSummary& member : pool) {
    profiles.push_back(build_profile(resolve_candidate(member, ds).tokens, ds, emb));
  }
  return summary_block(profiles[pool_index], doc, profiles, pool_index, emb);
}

std::vector<SummaryFeatures> extract_pool_features(
    const std::vector<CandidateSummary>& pool, const DocumentSet& ds,
    const EmbeddingTable* emb) {
  const TextProfile doc = build_document_profile(ds, emb);
  std::vector<ResolvedCandidate> resolved;
  std::vector<TextProfile> profiles;
  resolved.reserve(pool.size());
  profiles.reserve(pool.size());
  for (const CandidateSummary& c : pool) {
    resolved.push_back(resolve_candidate(c, ds));
    profiles.push_back(build_profile(resolved.back().tokens, ds, emb));
  }
  std::vector<SummaryFeatures> features;
  features.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    SummaryFeatures f;
    f.schema_id = kRerankFeatureSchema;
    f.word_level = word_block(resolved[i], ds);
    f.sentence_level = sentence_block(resolved[i]);
    f.summary_level = summary_block(profiles[i], doc, profiles, i, emb);
    features.push_back(std::move(f));
  }
  return features;
}

FeatureScaler fit_scaler(const std::vector<SummaryFeatures>& all_features) {
  if (all_features.empty()) throw DataError("cannot fit a scaler on no features");
  FeatureScaler scaler;
  scaler.min = all_features.front().concat();
  scaler.max = scaler.min;
  for (const SummaryFeatures& f : all_features) {
    const std::vector<double> row = f.concat();
    if (row.size() != scaler.min.size()) {
      throw DataError("inconsistent feature dimensions while fitting scaler");
    }
    for (std::size_t d = 0; d < row.size(); ++d) {
      scaler.min[d] = std::min(scaler.min[d], row[d]);
      scaler.max[d] = std::max(scaler.max[d], row[d]);
    }
  }
  return scaler;
}

SummaryFeatures apply_scaler(const FeatureScaler& scaler, const SummaryFeatures& f) {
  const std::vector<double> row = f.concat();
  if (row.size() != scaler.min.size()) {
    throw DataError("feature dimension does not match scaler");
  }
  std::vector<double> scaled(row.size());
  for (std::size_t d = 0; d < row.size(); ++d) {
    if (scaler.max[d] <= scaler.min[d]) {
      scaled[d] = 0.0;
    } else {
      scaled[d] = std::clamp((row[d] - scaler.min[d]) /
                                 (scaler.max[d] - scaler.min[d]),
                             0.0, 1.0);
    }
  }
  SummaryFeatures out;
  out.schema_id = f.schema_id;
  out.word_level.assign(scaled.begin(), scaled.begin() + kWordBlockDim);
  out.sentence_level.assign(scaled.begin() + kWordBlockDim,
                            scaled.begin() + kWordBlockDim + kSentenceBlockDim);
  out.summary_level.assign(scaled.begin() + kWordBlockDim + kSentenceBlockDim,
                           scaled.end());
  return out;
}

namespace {

std::string csv_escape(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char ch : value) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::string> csv_split(const std::string& line, int line_no,
                                   const std::string& file) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  if (quoted) {
    throw DataError(file + " line " + std::to_string(line_no) +
                    ": unterminated quoted field");
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

double parse_double(const std::string& text, int line_no, const std::string& file) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw DataError(file + " line " + std::to_string(line_no) +
                    ": malformed number '" + text + "'");
  }
}

}  // namespace

void save_features_csv(const std::vector<FeatureRecord>& records,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open feature file for writing: " + path.string());
  out << "#schema " << kRerankFeatureSchema << '\n';
  out << "set_id,system_id,source,lambda,iteration,label";
  for (const char* name : kRerankFeatureNames) out << ',' << name;
  out << '\n';
  for (const FeatureRecord& rec : records) {
    const std::vector<double> row = rec.features.concat();
    if (row.size() != kRerankFeatureDim) {
      throw DataError("feature record has wrong dimension");
    }
    out << csv_escape(rec.set_id) << ',' << csv_escape(rec.system_id) << ','
        << (rec.source == CandidateSource::kIlp ? "ilp" : "external") << ','
        << format_double(rec.lambda) << ',' << rec.iteration << ','
        << format_double(rec.label);
    for (double value : row) out << ',' << format_double(value);
    out << '\n';
  }
}

std::vector<FeatureRecord> load_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open feature file: " + path.string());
  const std::string file = "feature file " + path.string();
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line) || line != std::string("#schema ") + kRerankFeatureSchema) {
    throw DataError(file + ": missing or mismatched schema line");
  }
  ++line_no;
  if (!std::getline(in, line)) throw DataError(file + ": missing header");
  ++line_no;
  std::vector<FeatureRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = csv_split(line, line_no, file);
    if (fields.size() != 6 + kRerankFeatureDim) {
      throw DataError(file + " line " + std::to_string(line_no) + ": expected " +
                      std::to_string(6 + kRerankFeatureDim) + " fields, got " +
                      std::to_string(fields.size()));
    }
    FeatureRecord rec;
    rec.set_id = fields[0];
    rec.system_id = fields[1];
    if (fields[2] == "ilp") {
      rec.source = CandidateSource::kIlp;
    } else if (fields[2] == "external") {
      rec.source = CandidateSource::kExternal;
    } else {
      throw DataError(file + " line " + std::to_string(line_no) +
                      ": unknown source '" + fields[2] + "'");
    }
    rec.lambda = parse_double(fields[3], line_no, file);
    rec.iteration = static_cast<int>(parse_double(fields[4], line_no, file));
    rec.label = parse_double(fields[5], line_no, file);
    rec.features.schema_id = kRerankFeatureSchema;
    std::vector<double> row(kRerankFeatureDim);
    for (int d = 0; d < kRerankFeatureDim; ++d) {
      row[d] = parse_double(fields[6 + d], line_no, file);
    }
    rec.features.word_level.assign(row.begin(), row.begin() + kWordBlockDim);
    rec.features.sentence_level.assign(
        row.begin() + kWordBlockDim,
        row.begin() + kWordBlockDim + kSentenceBlockDim);
    rec.features.summary_level.assign(
        row.begin() + kWordBlockDim + kSentenceBlockDim, row.end());
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace sumrank
