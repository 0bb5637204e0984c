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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "sumrank/corpus.hpp"
#include "sumrank/rerank_features.hpp"

using namespace sumrank;

namespace {

// Two documents, two sentences each, with annotations:
//   s0 doc0 "Obama won 5 states."   NN VB CD NN, obama is an entity
//   s1 doc0 "The flood was big."    -- NN VB JJ
//   s2 doc1 "Rivers rose quickly."  NN VB RB
//   s3 doc1 "The town flood ended." -- NN NN VB
// Vocabulary (non-stopword types): obama won 5 states flood big rivers rose
// quickly town ended; flood has tf=2, df=2, everything else 1/1.
const char kFixtureJsonl[] =
    R"({"set_id":"f","documents":[)"
    R"({"doc_id":0,"sentences":[)"
    R"({"text":"Obama won 5 states.","pos":["NN","VB","CD","NN"],"ner":[1,0,0,0]},)"
    R"({"text":"The flood was big.","pos":["DT","NN","VB","JJ"],"ner":[0,0,0,0]}]},)"
    R"({"doc_id":1,"sentences":[)"
    R"({"text":"Rivers rose quickly.","pos":["NN","VB","RB"],"ner":[0,0,0]},)"
    R"({"text":"The town flood ended.","pos":["DT","NN","NN","VB"],"ner":[0,0,0,0]}]}]})"
    "\n";

DocumentSet fixture_set() {
  const auto path = std::filesystem::temp_directory_path() / "sumrank_feat_corpus.jsonl";
  {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << kFixtureJsonl;
  }
  std::vector<Cluster> clusters = parse_corpus(path);
  std::filesystem::remove(path);
  REQUIRE(clusters.size() == 1);
  return std::move(clusters[0].documents);
}

CandidateSummary internal_candidate(const DocumentSet& ds, std::vector<int> ids) {
  CandidateSummary c;
  c.set_id = "f";
  c.sentence_ids = std::move(ids);
  c.lambda = 0.5;
  c.iteration = 1;
  std::string text;
  for (std::size_t i = 0; i < c.sentence_ids.size(); ++i) {
    if (i > 0) text += '\n';
    text += ds.sentences[c.sentence_ids[i]].text;
  }
  c.text = text;
  return c;
}

std::filesystem::path write_embeddings(const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / "sumrank_feat_emb.txt";
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
  return path;
}

SummaryFeatures flat_features(double word, double sentence, double summary) {
  SummaryFeatures f;
  f.schema_id = kRerankFeatureSchema;
  f.word_level.assign(kWordBlockDim, word);
  f.sentence_level.assign(kSentenceBlockDim, sentence);
  f.summary_level.assign(kSummaryBlockDim, summary);
  return f;
}

}  // namespace

TEST_CASE("word block on a lead-heavy candidate") {
  const DocumentSet ds = fixture_set();
  const CandidateSummary c = internal_candidate(ds, {0, 2});
  const std::vector<double> f = word_level(c, ds);
  REQUIRE(f.size() == kWordBlockDim);
  // 7 tokens: obama won 5 states rivers rose quickly, each tf=df=1.
  CHECK(f[0] == doctest::Approx(7.0));  // tf sum
  CHECK(f[1] == doctest::Approx(7.0));  // df sum
  CHECK(f[2] == doctest::Approx(3.0 / 7.0));  // nouns: obama states rivers
  CHECK(f[3] == doctest::Approx(2.0 / 7.0));  // verbs: won rose
  CHECK(f[4] == doctest::Approx(1.0 / 7.0));  // adverb: quickly
  CHECK(f[5] == doctest::Approx(0.0));        // adjectives
  CHECK(f[6] == doctest::Approx(1.0 / 7.0));  // entity: obama
  CHECK(f[7] == doctest::Approx(0.0));        // stopwords
  CHECK(f[8] == doctest::Approx(1.0 / 7.0));  // number: 5
  CHECK(f[9] == doctest::Approx(1.0));        // all types distinct
  CHECK(f[10] == doctest::Approx(1.0));       // both sentences lead their doc
}

TEST_CASE("word block on a stopword-heavy candidate") {
  const DocumentSet ds = fixture_set();
  const CandidateSummary c = internal_candidate(ds, {1, 3});
  const std::vector<double> f = word_level(c, ds);
  // 8 tokens: the flood was big | the town flood ended.
  CHECK(f[0] == doctest::Approx(2.0 + 1.0 + 1.0 + 2.0 + 1.0));  // flood twice at tf 2
  CHECK(f[1] == doctest::Approx(7.0));
  CHECK(f[2] == doctest::Approx(3.0 / 8.0));  // flood town flood
  CHECK(f[3] == doctest::Approx(2.0 / 8.0));  // was ended
  CHECK(f[5] == doctest::Approx(1.0 / 8.0));  // big
  CHECK(f[6] == doctest::Approx(0.0));
  CHECK(f[7] == doctest::Approx(3.0 / 8.0));  // the was the
  CHECK(f[8] == doctest::Approx(0.0));
  CHECK(f[9] == doctest::Approx(6.0 / 8.0));  // "the" and "flood" repeat
  CHECK(f[10] == doctest::Approx(0.0));       // nothing from a lead sentence
}

TEST_CASE("sentence block aggregates lengths and position weights") {
  const DocumentSet ds = fixture_set();
  const std::vector<double> lead = sentence_level(internal_candidate(ds, {0, 2}), ds);
  REQUIRE(lead.size() == kSentenceBlockDim);
  CHECK(lead[0] == doctest::Approx(3.0));  // min tokens
  CHECK(lead[1] == doctest::Approx(4.0));  // max tokens
  CHECK(lead[2] == doctest::Approx(3.5));  // mean tokens
  CHECK(lead[3] == doctest::Approx(1.0));  // both are first sentences
  CHECK(lead[4] == doctest::Approx(1.0));
  CHECK(lead[5] == doctest::Approx(2.0));

  const std::vector<double> tail = sentence_level(internal_candidate(ds, {1, 3}), ds);
  CHECK(tail[3] == doctest::Approx(0.0));  // both are last sentences of two
  CHECK(tail[4] == doctest::Approx(0.0));

  const std::vector<double> mixed = sentence_level(internal_candidate(ds, {0, 1}), ds);
  CHECK(mixed[3] == doctest::Approx(0.5));
  CHECK(mixed[4] == doctest::Approx(1.0));
}

TEST_CASE("candidate resolution") {
  const DocumentSet ds = fixture_set();

  SUBCASE("empty summaries are rejected") {
    CandidateSummary empty;
    empty.set_id = "f";
    CHECK_THROWS_WITH_AS(word_level(empty, ds), doctest::Contains("empty"),
                         DataError);
  }
  SUBCASE("unknown sentence ids are rejected") {
    CandidateSummary bad;
    bad.set_id = "f";
    bad.sentence_ids = {99};
    CHECK_THROWS_AS(word_level(bad, ds), DataError);
  }
  SUBCASE("external text is matched case-insensitively to set sentences") {
    CandidateSummary ext;
    ext.set_id = "f";
    ext.source = CandidateSource::kExternal;
    ext.system_id = "sys";
    ext.text = "RIVERS ROSE QUICKLY.\nA made up line.";
    const ResolvedCandidate r = resolve_candidate(ext, ds);
    REQUIRE(r.sentences.size() == 2);
    CHECK(r.position_weights[0] == doctest::Approx(1.0));  // matches s2
    CHECK(r.position_weights[1] == doctest::Approx(0.5));  // unmatched: neutral
    CHECK(r.tokens.size() == 3 + 4);
    const std::vector<double> f = sentence_level(ext, ds);
    CHECK(f[3] == doctest::Approx(0.75));
    CHECK(f[4] == doctest::Approx(1.0));
  }
}

TEST_CASE("summary block against the full document set") {
  const DocumentSet ds = fixture_set();
  // A candidate holding every sentence is textually identical to the set.
  const std::vector<CandidateSummary> pool = {internal_candidate(ds, {0, 1, 2, 3})};
  const std::vector<double> f = summary_level(pool, 0, ds, nullptr);
  REQUIRE(f.size() == kSummaryBlockDim);
  CHECK(f[0] == doctest::Approx(1.0));  // identical tf-idf vectors
  CHECK(f[1] == doctest::Approx(0.0));  // zero divergence
  CHECK(f[2] == doctest::Approx(1.0));  // full type overlap
  CHECK(f[3] == doctest::Approx(0.0));  // no embeddings supplied
  CHECK(f[4] == doctest::Approx(0.0));  // pool of one
  CHECK(f[5] == doctest::Approx(0.0));

  // A partial candidate diverges and overlaps only partially.
  const std::vector<CandidateSummary> partial = {internal_candidate(ds, {0})};
  const std::vector<double> g = summary_level(partial, 0, ds, nullptr);
  CHECK(g[0] > 0.0);
  CHECK(g[0] < 1.0);
  CHECK(g[1] > 0.0);
  CHECK(g[2] == doctest::Approx(4.0 / 11.0));  // 4 of 11 vocabulary types
}

TEST_CASE("summary block embedding and pool features") {
  const DocumentSet ds = fixture_set();
  const auto emb_path = write_embeddings(
      "obama 1.0 0.0\n"
      "rivers 0.0 1.0\n"
      "flood 1.0 0.0\n");
  const EmbeddingTable emb = load_embeddings(emb_path);
  std::filesystem::remove(emb_path);
  REQUIRE(emb.dim == 2);

  const std::vector<CandidateSummary> pool = {internal_candidate(ds, {0}),
                                              internal_candidate(ds, {2})};
  const std::vector<double> a = summary_level(pool, 0, ds, &emb);
  // Candidate {0} mean embedding (1,0); document mean over the four covered
  // occurrences obama + rivers + flood + flood = (3,1)/4.
  const double doc_cos = 0.75 / std::sqrt(0.75 * 0.75 + 0.25 * 0.25);
  CHECK(a[3] == doctest::Approx((doc_cos + 1.0) / 2.0));
  // Types {obama won 5 states} vs {rivers rose quickly}: disjoint.
  CHECK(a[4] == doctest::Approx(0.0));
  // (1,0) vs (0,1): raw cosine 0, mapped 0.5.
  CHECK(a[5] == doctest::Approx(0.5));

  // Identical pool members overlap perfectly with each other.
  const std::vector<CandidateSummary> twins = {internal_candidate(ds, {0}),
                                               internal_candidate(ds, {0})};
  const std::vector<double> t = summary_level(twins, 0, ds, &emb);
  CHECK(t[4] == doctest::Approx(1.0));
  CHECK(t[5] == doctest::Approx(1.0));

  // A candidate with no in-vocabulary embedding word zeroes dims 3 and 5:
  // shrink the table so "rivers rose quickly" is entirely uncovered.
  const auto narrow_path = write_embeddings("obama 1.0 0.0\n");
  const EmbeddingTable narrow = load_embeddings(narrow_path);
  std::filesystem::remove(narrow_path);
  const std::vector<double> n = summary_level(pool, 1, ds, &narrow);
  CHECK(n[3] == doctest::Approx(0.0));
  CHECK(n[5] == doctest::Approx(0.0));
  CHECK(n[2] > 0.0);  // type overlap is unaffected
}

TEST_CASE("extract_pool_features matches the per-block functions") {
  const DocumentSet ds = fixture_set();
  const std::vector<CandidateSummary> pool = {internal_candidate(ds, {0, 2}),
                                              internal_candidate(ds, {1, 3})};
  const std::vector<SummaryFeatures> all = extract_pool_features(pool, ds, nullptr);
  REQUIRE(all.size() == 2);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    CHECK(all[i].schema_id == kRerankFeatureSchema);
    CHECK(all[i].word_level == word_level(pool[i], ds));
    CHECK(all[i].sentence_level == sentence_level(pool[i], ds));
    CHECK(all[i].summary_level == summary_level(pool, i, ds, nullptr));
    CHECK(all[i].concat().size() == kRerankFeatureDim);
  }
}

TEST_CASE("embedding file validation") {
  const auto path = std::filesystem::temp_directory_path() / "sumrank_feat_bademb.txt";
  CHECK_THROWS_AS(load_embeddings(path / "missing.txt"), DataError);

  auto write_and_load = [&](const std::string& content) {
    std::ofstream out(path);
    out << content;
    out.close();
    return load_embeddings(path);
  };
  CHECK_THROWS_WITH_AS(write_and_load("w 1.0\nv 1.0 2.0\n"),
                       doctest::Contains("line 2"), DataError);
  CHECK_THROWS_WITH_AS(write_and_load("w 1.0 oops\n"),
                       doctest::Contains("malformed"), DataError);
  CHECK_THROWS_WITH_AS(write_and_load("w\n"), doctest::Contains("malformed"),
                       DataError);
  CHECK_THROWS_WITH_AS(write_and_load("w 1.0\nw 2.0\n"),
                       doctest::Contains("duplicate"), DataError);
  const EmbeddingTable ok = write_and_load("w 1.0 2.0\n\nv 3.0 4.0\n");
  CHECK(ok.dim == 2);
  CHECK(ok.vectors.size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("min-max scaler") {
  std::vector<SummaryFeatures> rows = {flat_features(2.0, 3.0, 0.0),
                                       flat_features(4.0, 3.0, 0.0),
                                       flat_features(6.0, 3.0, 0.0)};
  const FeatureScaler scaler = fit_scaler(rows);
  REQUIRE(scaler.min.size() == kRerankFeatureDim);
  CHECK(scaler.min[0] == doctest::Approx(2.0));
  CHECK(scaler.max[0] == doctest::Approx(6.0));

  const SummaryFeatures mid = apply_scaler(scaler, rows[1]);
  for (double v : mid.word_level) CHECK(v == doctest::Approx(0.5));
  // Constant dimensions collapse to zero.
  for (double v : mid.sentence_level) CHECK(v == doctest::Approx(0.0));

  // Out-of-range values are clamped.
  const SummaryFeatures high = apply_scaler(scaler, flat_features(8.0, 3.0, 0.0));
  for (double v : high.word_level) CHECK(v == doctest::Approx(1.0));
  const SummaryFeatures low = apply_scaler(scaler, flat_features(0.0, 3.0, 0.0));
  for (double v : low.word_level) CHECK(v == doctest::Approx(0.0));

  CHECK_THROWS_AS(fit_scaler({}), DataError);
  SummaryFeatures short_row = flat_features(1.0, 1.0, 1.0);
  short_row.summary_level.pop_back();
  CHECK_THROWS_AS(apply_scaler(scaler, short_row), DataError);
}

TEST_CASE("feature CSV dump round-trips exactly") {
  FeatureRecord rec;
  rec.set_id = "set,with\"odd chars";
  rec.system_id = "";
  rec.lambda = 1.0 / 3.0;
  rec.iteration = 7;
  rec.source = CandidateSource::kIlp;
  rec.label = 0.123456789012345678;
  rec.features = flat_features(1.0 / 7.0, 2.0 / 3.0, 0.1);
  FeatureRecord ext;
  ext.set_id = "s2";
  ext.system_id = "peer system";
  ext.lambda = 0.0;
  ext.iteration = 0;
  ext.source = CandidateSource::kExternal;
  ext.label = 1.0;
  ext.features = flat_features(0.0, 5.0, 1e-17);

  const auto path = std::filesystem::temp_directory_path() / "sumrank_feat_dump.csv";
  save_features_csv({rec, ext}, path);
  const std::vector<FeatureRecord> loaded = load_features_csv(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].set_id == rec.set_id);
  CHECK(loaded[0].system_id.empty());
  CHECK(loaded[0].lambda == rec.lambda);  // bit-exact
  CHECK(loaded[0].iteration == 7);
  CHECK(loaded[0].source == CandidateSource::kIlp);
  CHECK(loaded[0].label == rec.label);
  CHECK(loaded[0].features.concat() == rec.features.concat());
  CHECK(loaded[1].system_id == "peer system");
  CHECK(loaded[1].source == CandidateSource::kExternal);
  CHECK(loaded[1].features.concat() == ext.features.concat());

  // Schema line is enforced on load.
  {
    std::ofstream out(path);
    out << "#schema something-else\nset_id\n";
  }
  CHECK_THROWS_WITH_AS(load_features_csv(path), doctest::Contains("schema"),
                       DataError);
  CHECK_THROWS_AS(load_features_csv(path.parent_path() / "missing.csv"), DataError);
  std::filesystem::remove(path);
}
