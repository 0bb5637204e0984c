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
// Microbenchmarks for the hot paths: tokenization, bigram recall, the
// branch-and-bound solver, pool generation, feature extraction, and the two
// trainers. Fixtures are deterministic and built once per process.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sumrank/corpus.hpp"
#include "sumrank/ilp.hpp"
#include "sumrank/importance.hpp"
#include "sumrank/report.hpp"
#include "sumrank/rerank_features.hpp"
#include "sumrank/reranker.hpp"
#include "sumrank/rouge.hpp"
#include "sumrank/text_similarity.hpp"

namespace {

using namespace sumrank;

const char* kLexicon[] = {
    "harbor", "signal", "meadow", "copper", "lantern", "gravel", "timber",
    "summit", "anchor", "willow", "garnet", "hollow", "spruce", "marble",
    "cinder", "falcon", "quarry", "ribbon", "saddle", "tundra", "velvet",
    "walnut", "zephyr", "basalt", "cobalt", "drift",  "ember",  "fjord",
    "glacier", "heron", "inlet",  "juniper"};
constexpr int kLexiconSize = static_cast<int>(std::size(kLexicon));

std::string random_sentence(std::mt19937_64& rng, int words) {
  std::ostringstream text;
  text << "The";
  for (int w = 0; w < words; ++w) {
    text << ' ' << kLexicon[rng() % kLexiconSize];
    if (w == words / 2) text << " of";
  }
  text << '.';
  return text.str();
}

// One cluster written as JSONL and parsed back, so the benchmark exercises
// the same statistics the pipeline sees.
Cluster make_cluster(int docs, int sentences_per_doc, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::ostringstream line;
  line << R"({"set_id":"bench","documents":[)";
  std::vector<std::string> leads;
  for (int d = 0; d < docs; ++d) {
    if (d > 0) line << ',';
    line << R"({"doc_id":)" << d << R"(,"sentences":[)";
    for (int s = 0; s < sentences_per_doc; ++s) {
      const std::string text = random_sentence(rng, 5 + static_cast<int>(rng() % 5));
      if (s == 0) leads.push_back(text);
      if (s > 0) line << ',';
      line << R"({"text":")" << text << R"("})";
    }
    line << "]}";
  }
  line << R"(],"references":[")" << leads[0] << R"(",")" << leads[1] << R"("]})";

  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "sumrank_bench_corpus.jsonl";
  std::ofstream out(path);
  out << line.str() << '\n';
  out.close();
  return parse_corpus(path).front();
}

const Cluster& cluster() {
  static const Cluster c = make_cluster(4, 8, 97);
  return c;
}

LinearModel train_model(bool sentence_level) {
  const Cluster& c = cluster();
  std::vector<RegressionInstance> data;
  if (sentence_level) {
    for (const Sentence& s : c.documents.sentences) {
      data.push_back({sentence_features(s, c.documents),
                      sentence_target(s, *c.references)});
    }
  } else {
    for (const auto& [word, stats] : c.documents.vocabulary) {
      data.push_back({word_features(stats, c.documents),
                      word_target(stats, *c.references)});
    }
  }
  SvrOptions options;
  options.epochs = 40;
  return train_svr(data, options,
                   sentence_level ? kSentenceFeatureSchema : kWordFeatureSchema);
}

const LinearModel& word_model() {
  static const LinearModel m = train_model(false);
  return m;
}

const LinearModel& sentence_model() {
  static const LinearModel m = train_model(true);
  return m;
}

const std::vector<CandidateSummary>& pool() {
  static const std::vector<CandidateSummary> p = [] {
    GenerationOptions options;
    options.budget = 40;
    return generate_candidates(cluster().documents, sentence_model(),
                               word_model(), options);
  }();
  return p;
}

ILPInstance bench_instance(int rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ILPInstance inst;
  inst.lambda = 0.5;
  const int words = rows * 3;
  inst.v.resize(words);
  for (double& score : inst.v) score = unit(rng);
  for (int w = 0; w < words; ++w) {
    inst.words.push_back("w" + std::to_string(w));
  }
  for (int i = 0; i < rows; ++i) {
    inst.sentence_ids.push_back(i);
    inst.lengths.push_back(2 + static_cast<int>(rng() % 7));
    inst.u.push_back(unit(rng));
    std::set<int> cover;
    const int k = 2 + static_cast<int>(rng() % 5);
    for (int j = 0; j < k; ++j) cover.insert(static_cast<int>(rng() % words));
    inst.incidence.emplace_back(cover.begin(), cover.end());
  }
  int total = 0;
  for (int l : inst.lengths) total += l;
  inst.budget = total / 3;
  return inst;
}

void BM_Tokenize(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const std::string text = random_sentence(rng, 60);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tokenize(text));
  }
}
BENCHMARK(BM_Tokenize);

void BM_Rouge2Recall(benchmark::State& state) {
  std::mt19937_64 rng(11);
  auto tokens = [&](int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(kLexicon[rng() % kLexiconSize]);
    return out;
  };
  std::vector<std::vector<std::string>> candidate;
  for (int s = 0; s < 5; ++s) candidate.push_back(tokens(9));
  ReferenceSet refs;
  refs.references = {{tokens(10), tokens(8)}, {tokens(12)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rouge2_recall(candidate, refs));
  }
}
BENCHMARK(BM_Rouge2Recall);

void BM_JsDivergence(benchmark::State& state) {
  std::mt19937_64 rng(13);
  CountMap p, q;
  for (int i = 0; i < 80; ++i) {
    p[kLexicon[rng() % kLexiconSize] + std::to_string(i % 9)] += 1;
    q[kLexicon[rng() % kLexiconSize] + std::to_string(i % 7)] += 1;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(js_divergence(p, q));
  }
}
BENCHMARK(BM_JsDivergence);

void BM_Solve(benchmark::State& state) {
  const ILPInstance inst = bench_instance(static_cast<int>(state.range(0)), 23);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(inst));
  }
}
BENCHMARK(BM_Solve)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

void BM_GeneratePool(benchmark::State& state) {
  const Cluster& c = cluster();
  GenerationOptions options;
  options.budget = 40;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        generate_candidates(c.documents, sentence_model(), word_model(), options));
  }
}
BENCHMARK(BM_GeneratePool);

void BM_PoolFeatures(benchmark::State& state) {
  const Cluster& c = cluster();
  const std::vector<CandidateSummary>& p = pool();
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_pool_features(p, c.documents, nullptr));
  }
}
BENCHMARK(BM_PoolFeatures);

void BM_TrainSvr(benchmark::State& state) {
  const Cluster& c = cluster();
  std::vector<RegressionInstance> data;
  for (const auto& [word, stats] : c.documents.vocabulary) {
    data.push_back({word_features(stats, c.documents),
                    word_target(stats, *c.references)});
  }
  SvrOptions options;
  options.epochs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_svr(data, options, kWordFeatureSchema));
  }
}
BENCHMARK(BM_TrainSvr)->Arg(20)->Arg(50);

void BM_TrainRanker(benchmark::State& state) {
  const Cluster& c = cluster();
  const std::vector<SummaryFeatures> features =
      extract_pool_features(pool(), c.documents, nullptr);
  std::map<std::string, std::vector<std::pair<SummaryFeatures, double>>> by_set;
  auto& rows = by_set["bench"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    rows.emplace_back(features[i], candidate_rouge2(pool()[i], c.documents,
                                                    *c.references));
  }
  const std::vector<RankingPair> pairs = build_pairs(by_set);
  RankerOptions options;
  options.epochs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_ranksvm(pairs, options));
  }
}
BENCHMARK(BM_TrainRanker)->Arg(20)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
