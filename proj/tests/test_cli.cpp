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
// Black-box tests of the command line binary. The binary path and the fixture
// directory come in through compile definitions.

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#ifndef SUMRANK_CLI_PATH
#error "SUMRANK_CLI_PATH must point at the sumrank binary"
#endif
#ifndef SUMRANK_DATA_DIR
#error "SUMRANK_DATA_DIR must point at the fixture directory"
#endif

namespace {

namespace fs = std::filesystem;

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CommandResult run_cli(const std::string& args) {
  static std::atomic<int> counter{0};
  const int id = counter++;
  const fs::path out_path =
      fs::temp_directory_path() / ("sumrank_cli_out_" + std::to_string(id));
  const fs::path err_path =
      fs::temp_directory_path() / ("sumrank_cli_err_" + std::to_string(id));
  const std::string command = std::string(SUMRANK_CLI_PATH) + " " + args + " > " +
                              out_path.string() + " 2> " + err_path.string();
  const int status = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  fs::remove(out_path);
  fs::remove(err_path);
  return result;
}

std::string data_file(const std::string& name) {
  return (fs::path(SUMRANK_DATA_DIR) / name).string();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Fast training settings shared by the workflow tests.
std::string fast_flags(const fs::path& out) {
  return "--budget 12 --lambdas 0,0.5 --per-lambda 2 --svr-epochs 6 "
         "--ranker-epochs 6 --jobs 2 --out " +
         out.string();
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(contains(run_cli("--help").out, "ingest"));
  CHECK(run_cli("train --help").exit_code == 0);

  CHECK(run_cli("").exit_code == 1);                       // subcommand required
  CHECK(run_cli("no-such-command").exit_code == 1);
  CHECK(run_cli("train").exit_code == 1);                  // missing corpus
  CHECK(run_cli("summarize x.jsonl --unit meters").exit_code == 1);
  CHECK(run_cli("summarize x.jsonl --mask everything").exit_code == 1);
  CHECK(run_cli("train x.jsonl --no-such-flag").exit_code == 1);
}

TEST_CASE("ingest prints the corpus shape") {
  const CommandResult r = run_cli("ingest " + data_file("demo_corpus.jsonl"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "demo-a: 2 documents, 8 sentences,"));
  CHECK(contains(r.out, "demo-b: 2 documents, 8 sentences,"));
  CHECK(contains(r.out, ", references"));
  CHECK(contains(r.out,
                 "total: 2 clusters, 4 documents, 16 sentences, 2 with references"));

  const CommandResult missing = run_cli("ingest does_not_exist.jsonl");
  CHECK(missing.exit_code == 2);
  CHECK(contains(missing.err, "error:"));
}

TEST_CASE("ingest --normalize rewrites the corpus") {
  TempDir dir("sumrank_cli_norm");
  const fs::path norm = dir.path / "normalized.jsonl";
  const CommandResult r = run_cli("ingest " + data_file("demo_corpus.jsonl") +
                                  " --normalize " + norm.string());
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "normalized corpus written to"));
  REQUIRE(fs::exists(norm));
  const CommandResult again = run_cli("ingest " + norm.string());
  CHECK(again.exit_code == 0);
  CHECK(contains(again.out,
                 "total: 2 clusters, 4 documents, 16 sentences, 2 with references"));
}

TEST_CASE("train, summarize, evaluate, rerank and ablate") {
  TempDir dir("sumrank_cli_flow");
  const fs::path art = dir.path / "art";
  const std::string corpus = data_file("demo_corpus.jsonl");
  const std::string embeddings = " --embeddings " + data_file("embeddings.txt");

  const CommandResult train =
      run_cli("train " + corpus + " " + fast_flags(art) + embeddings);
  CAPTURE(train.err);
  REQUIRE(train.exit_code == 0);
  CHECK(contains(train.out, "artifacts written to"));
  CHECK(fs::exists(art / "word_model.json"));
  CHECK(fs::exists(art / "sentence_model.json"));
  CHECK(fs::exists(art / "ranker.json"));
  CHECK(fs::exists(art / "train_features.csv"));
  CHECK(fs::exists(art / "manifest.json"));

  const CommandResult summarize =
      run_cli("summarize " + corpus + " " + fast_flags(art) + embeddings);
  CAPTURE(summarize.err);
  REQUIRE(summarize.exit_code == 0);
  CHECK(fs::exists(art / "pool.jsonl"));
  CHECK(fs::exists(art / "selections.jsonl"));
  CHECK(fs::exists(art / "summaries" / "demo-a.txt"));
  CHECK(fs::exists(art / "summaries" / "demo-b.txt"));

  // Selections are picked up by default, producing the approach row.
  const CommandResult evaluate =
      run_cli("evaluate " + corpus + " " + fast_flags(art));
  CAPTURE(evaluate.err);
  REQUIRE(evaluate.exit_code == 0);
  CHECK(contains(evaluate.out, "sets: 2  models: 4"));
  CHECK(contains(evaluate.out, "approach"));
  CHECK(contains(evaluate.out, "upper bound"));
  CHECK(contains(evaluate.out, "best"));
  CHECK(contains(evaluate.out, "worst"));
  CHECK(fs::exists(art / "report.json"));

  // Without a selections file the approach row disappears.
  TempDir bare_dir("sumrank_cli_bare");
  const CommandResult bare =
      run_cli("evaluate " + corpus + " --pool " + (art / "pool.jsonl").string() +
              " " + fast_flags(bare_dir.path / "bare-art"));
  REQUIRE(bare.exit_code == 0);
  CHECK(contains(bare.out, "upper bound"));
  CHECK_FALSE(contains(bare.out, "approach"));

  const CommandResult rerank =
      run_cli("rerank-external " + corpus + " " +
              data_file("external_candidates.jsonl") + " " + fast_flags(art));
  CAPTURE(rerank.err);
  REQUIRE(rerank.exit_code == 0);
  CHECK(contains(rerank.out, "sets: 2  models: 1"));
  CHECK(contains(rerank.out, "(lead3)"));
  CHECK(contains(rerank.err, "tail1"));  // dropped: does not cover demo-b

  const CommandResult ablate = run_cli("ablate " + fast_flags(art));
  CAPTURE(ablate.err);
  REQUIRE(ablate.exit_code == 0);
  for (const std::string mask :
       {"all", "no-word", "no-sentence", "no-summary", "no-embedding"}) {
    CHECK(contains(ablate.out, mask));
  }
  CHECK(fs::exists(art / "ablation.json"));
}

TEST_CASE("flags override the config file") {
  TempDir dir("sumrank_cli_cfg");
  const fs::path art = dir.path / "cfg-art";
  const CommandResult train =
      run_cli("train " + data_file("demo_corpus.jsonl") + " --config " +
              data_file("config.json") + " --budget 9 --out " + art.string());
  CAPTURE(train.err);
  REQUIRE(train.exit_code == 0);
  const std::string manifest = slurp(art / "manifest.json");
  CHECK(contains(manifest, "\"budget\": 9"));        // flag wins
  CHECK(contains(manifest, "\"per_lambda\": 2"));    // config file value kept
  CHECK(contains(manifest, "\"out\": \"" + art.string() + "\""));
}

TEST_CASE("data errors exit with code 2") {
  TempDir dir("sumrank_cli_err");
  // Budget must be positive.
  const CommandResult bad_budget = run_cli(
      "train " + data_file("demo_corpus.jsonl") + " --budget 0 --out " +
      (dir.path / "a").string());
  CHECK(bad_budget.exit_code == 2);
  CHECK(contains(bad_budget.err, "error:"));

  // Training needs references.
  const fs::path norefs = dir.path / "norefs.jsonl";
  {
    std::ofstream out(norefs);
    out << R"({"set_id":"nr","documents":[{"doc_id":0,"sentences":[)"
        << R"({"text":"Plain words here."},{"text":"More plain words follow."}]}]})"
        << '\n';
  }
  const CommandResult no_refs = run_cli("train " + norefs.string() + " --out " +
                                        (dir.path / "b").string());
  CHECK(no_refs.exit_code == 2);
  CHECK(contains(no_refs.err, "nr"));

  // Unknown config keys are rejected.
  const fs::path bad_config = dir.path / "bad_config.json";
  {
    std::ofstream out(bad_config);
    out << R"({"budgets": 100})";
  }
  const CommandResult unknown = run_cli(
      "summarize " + data_file("demo_corpus.jsonl") + " --config " +
      bad_config.string());
  CHECK(unknown.exit_code == 2);
  CHECK(contains(unknown.err, "budgets"));

  // Summarizing without trained artifacts fails cleanly.
  const CommandResult no_art = run_cli(
      "summarize " + data_file("demo_corpus.jsonl") + " --out " +
      (dir.path / "void").string());
  CHECK(no_art.exit_code == 2);
}
