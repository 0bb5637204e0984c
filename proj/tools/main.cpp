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
// sumrank command line front end.
//
//   sumrank ingest <corpus> [--normalize out.jsonl]
//   sumrank train <corpus> [flags]
//   sumrank summarize <corpus> [flags]
//   sumrank evaluate <corpus> [--pool p] [--selections s] [flags]
//   sumrank rerank-external <corpus> <candidates> [flags]
//   sumrank ablate [flags]
//
// Every flag mirrors a key of the JSON config file passed via --config;
// flags given on the command line override the file.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sumrank/corpus.hpp"
#include "sumrank/pipeline.hpp"
#include "sumrank/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// One slot per overridable flag; resolve_config only reads slots the user set.
struct FlagValues {
  std::string config_path;
  int budget = 0;
  std::string unit;
  std::vector<double> lambdas;
  int per_lambda = 0;
  double beta = 0.0;
  long long timeout_ms = 0;
  std::string embeddings;
  std::string mask;
  std::string kl_direction;
  double svr_c = 0.0;
  double svr_epsilon = 0.0;
  int svr_epochs = 0;
  unsigned long long seed_svr = 0;
  double ranker_c = 0.0;
  int ranker_epochs = 0;
  unsigned long long seed_ranker = 0;
  int jobs = 0;
  std::string out;
};

void add_config_flags(CLI::App* cmd, FlagValues& v) {
  cmd->add_option("--config", v.config_path,
                  "JSON config file mirroring these flags (flags override it)");
  cmd->add_option("--budget", v.budget, "summary length budget (default 100)");
  cmd->add_option("--unit", v.unit, "budget unit (default words)")
      ->check(CLI::IsMember({"words", "bytes"}));
  cmd->add_option("--lambdas", v.lambdas,
                  "tradeoff weights, comma separated (default 0.0..0.9)")
      ->delimiter(',');
  cmd->add_option("--per-lambda", v.per_lambda,
                  "candidates per tradeoff weight (default 10)");
  cmd->add_option("--beta", v.beta, "overlap cap ratio (default 0.6)");
  cmd->add_option("--timeout-ms", v.timeout_ms,
                  "per-solve time limit in ms, <=0 unlimited (default 0)");
  cmd->add_option("--embeddings", v.embeddings,
                  "word embedding file for the embedding features");
  cmd->add_option("--mask", v.mask, "ranking feature mask (default all)")
      ->check(CLI::IsMember(
          {"all", "no-word", "no-sentence", "no-summary", "no-embedding"}));
  cmd->add_option("--kl-direction", v.kl_direction,
                  "KL baseline direction (default summary)")
      ->check(CLI::IsMember({"summary", "document"}));
  cmd->add_option("--svr-c", v.svr_c, "importance SVR regularization (default 1.0)");
  cmd->add_option("--svr-epsilon", v.svr_epsilon,
                  "importance SVR insensitivity (default 0.1)");
  cmd->add_option("--svr-epochs", v.svr_epochs,
                  "importance SVR training epochs (default 50)");
  cmd->add_option("--seed-svr", v.seed_svr, "importance SVR seed (default 42)");
  cmd->add_option("--ranker-c", v.ranker_c, "ranker regularization (default 1.0)");
  cmd->add_option("--ranker-epochs", v.ranker_epochs,
                  "ranker training epochs (default 100)");
  cmd->add_option("--seed-ranker", v.seed_ranker, "ranker seed (default 42)");
  cmd->add_option("--jobs", v.jobs, "worker threads over document sets (default 1)");
  cmd->add_option("--out", v.out, "artifact directory (default artifacts)");
}

sumrank::RunConfig resolve_config(const CLI::App* cmd, const FlagValues& v) {
  sumrank::RunConfig config;
  if (cmd->count("--config") > 0) config = sumrank::load_config(v.config_path);
  if (cmd->count("--budget") > 0) config.budget = v.budget;
  if (cmd->count("--unit") > 0) {
    config.unit = v.unit == "bytes" ? sumrank::LengthUnit::kBytes
                                    : sumrank::LengthUnit::kWords;
  }
  if (cmd->count("--lambdas") > 0) config.lambdas = v.lambdas;
  if (cmd->count("--per-lambda") > 0) config.per_lambda = v.per_lambda;
  if (cmd->count("--beta") > 0) config.beta = v.beta;
  if (cmd->count("--timeout-ms") > 0) config.timeout_ms = v.timeout_ms;
  if (cmd->count("--embeddings") > 0) config.embeddings = v.embeddings;
  if (cmd->count("--mask") > 0) config.mask = v.mask;
  if (cmd->count("--kl-direction") > 0) {
    config.kl_from_summary = v.kl_direction != "document";
  }
  if (cmd->count("--svr-c") > 0) config.svr_c = v.svr_c;
  if (cmd->count("--svr-epsilon") > 0) config.svr_epsilon = v.svr_epsilon;
  if (cmd->count("--svr-epochs") > 0) config.svr_epochs = v.svr_epochs;
  if (cmd->count("--seed-svr") > 0) config.seed_svr = v.seed_svr;
  if (cmd->count("--ranker-c") > 0) config.ranker_c = v.ranker_c;
  if (cmd->count("--ranker-epochs") > 0) config.ranker_epochs = v.ranker_epochs;
  if (cmd->count("--seed-ranker") > 0) config.seed_ranker = v.seed_ranker;
  if (cmd->count("--jobs") > 0) config.jobs = v.jobs;
  if (cmd->count("--out") > 0) config.out = v.out;
  sumrank::validate_config(config);
  return config;
}

void cmd_ingest(const std::string& corpus_path, const std::string& normalize_path) {
  const std::vector<sumrank::Cluster> clusters = sumrank::parse_corpus(corpus_path);
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t with_references = 0;
  for (const sumrank::Cluster& cluster : clusters) {
    documents += cluster.documents.doc_count();
    sentences += cluster.documents.sentences.size();
    if (cluster.references.has_value()) ++with_references;
    std::cout << cluster.documents.set_id << ": "
              << cluster.documents.doc_count() << " documents, "
              << cluster.documents.sentences.size() << " sentences, "
              << cluster.documents.vocabulary.size() << " vocabulary words"
              << (cluster.references.has_value() ? ", references" : "") << '\n';
  }
  std::cout << "total: " << clusters.size() << " clusters, " << documents
            << " documents, " << sentences << " sentences, " << with_references
            << " with references\n";
  if (!normalize_path.empty()) {
    sumrank::write_corpus(clusters, normalize_path);
    std::cout << "normalized corpus written to " << normalize_path << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage extractive multi-document summarization pipeline"};
  app.require_subcommand(1);

  std::string ingest_corpus;
  std::string ingest_normalize;
  CLI::App* ingest = app.add_subcommand("ingest", "Parse a corpus and print its shape");
  ingest->add_option("corpus", ingest_corpus, "corpus JSONL file")->required();
  ingest->add_option("--normalize", ingest_normalize,
                     "write the normalized corpus to this path");

  std::string train_corpus;
  FlagValues train_flags;
  CLI::App* train =
      app.add_subcommand("train", "Train importance models and the ranker");
  train->add_option("corpus", train_corpus, "training corpus with references")
      ->required();
  add_config_flags(train, train_flags);

  std::string summarize_corpus;
  FlagValues summarize_flags;
  CLI::App* summarize =
      app.add_subcommand("summarize", "Generate, rank and select summaries");
  summarize->add_option("corpus", summarize_corpus, "corpus JSONL file")->required();
  add_config_flags(summarize, summarize_flags);

  std::string evaluate_corpus;
  std::string evaluate_pool;
  std::string evaluate_selections;
  FlagValues evaluate_flags;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score a candidate pool against references");
  evaluate->add_option("corpus", evaluate_corpus, "corpus JSONL file with references")
      ->required();
  evaluate->add_option("--pool", evaluate_pool,
                       "candidate pool (default <out>/pool.jsonl)");
  evaluate->add_option("--selections", evaluate_selections,
                       "selection file for the approach row "
                       "(default <out>/selections.jsonl when present)");
  add_config_flags(evaluate, evaluate_flags);

  std::string rerank_corpus;
  std::string rerank_candidates;
  FlagValues rerank_flags;
  CLI::App* rerank = app.add_subcommand(
      "rerank-external", "Rerank externally supplied candidate summaries");
  rerank->add_option("corpus", rerank_corpus, "corpus JSONL file")->required();
  rerank->add_option("candidates", rerank_candidates, "external candidate JSONL file")
      ->required();
  add_config_flags(rerank, rerank_flags);

  FlagValues ablate_flags;
  CLI::App* ablate =
      app.add_subcommand("ablate", "Retrain the ranker under each feature mask");
  add_config_flags(ablate, ablate_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ingest->parsed()) {
      cmd_ingest(ingest_corpus, ingest_normalize);
    } else if (train->parsed()) {
      const sumrank::RunConfig config = resolve_config(train, train_flags);
      sumrank::run_train(train_corpus, config);
      std::cout << "artifacts written to " << config.out << '\n';
    } else if (summarize->parsed()) {
      const sumrank::RunConfig config = resolve_config(summarize, summarize_flags);
      sumrank::run_summarize(summarize_corpus, config);
      std::cout << "selections written to " << config.out << '\n';
    } else if (evaluate->parsed()) {
      const sumrank::RunConfig config = resolve_config(evaluate, evaluate_flags);
      const sumrank::ArtifactPaths paths{config.out};
      std::filesystem::path pool = evaluate_pool.empty()
                                       ? paths.pool()
                                       : std::filesystem::path(evaluate_pool);
      std::filesystem::path selections(evaluate_selections);
      if (selections.empty() && std::filesystem::exists(paths.selections())) {
        selections = paths.selections();
      }
      const sumrank::EvaluationReport report =
          sumrank::run_evaluate(evaluate_corpus, pool, selections, config);
      std::cout << sumrank::render_report(report);
    } else if (rerank->parsed()) {
      const sumrank::RunConfig config = resolve_config(rerank, rerank_flags);
      const sumrank::EvaluationReport report =
          sumrank::run_rerank_external(rerank_corpus, rerank_candidates, config);
      std::cout << sumrank::render_report(report);
    } else if (ablate->parsed()) {
      const sumrank::RunConfig config = resolve_config(ablate, ablate_flags);
      const std::map<std::string, double> means = sumrank::run_ablate(config);
      for (const auto& [mask, mean] : means) {
        char line[64];
        std::snprintf(line, sizeof(line), "%-13s %.3f", mask.c_str(), mean * 100.0);
        std::cout << line << '\n';
      }
    }
  } catch (const sumrank::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
