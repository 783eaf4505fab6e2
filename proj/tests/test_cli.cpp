#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "pipeline.hpp"
#include "skillrank/corpus.hpp"
#include "skillrank/io.hpp"

using namespace skillrank;
using fixtures::cli;

namespace {

std::vector<std::pair<std::string, double>> parse_rank_output(const std::string& out) {
  std::vector<std::pair<std::string, double>> rows;
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    rows.emplace_back(line.substr(0, tab), std::stod(line.substr(tab + 1)));
  }
  return rows;
}

}  // namespace

TEST_CASE("cli usage errors exit 1") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"split", "--in", "x", "--out-dir", "y", "--bogus"}).code == kExitUsage);
  CHECK(cli({"split", "--in", "x"}).code == kExitUsage);
  CHECK(cli({"rank", "--model", "m", "--title", "t"}).code == kExitUsage);
  const auto r = cli({"nope"});
  CHECK(r.out.empty());
  CHECK(!r.err.empty());
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("cli data errors exit 2") {
  fixtures::TempDir dir("cli-data");
  CHECK(cli({"split", "--in", dir.file("missing.jsonl"), "--out-dir", dir.file("out")}).code == kExitData);
  fixtures::spit(dir.file("bad.jsonl"), "{\"title\":\"a\",\"skills\":[\"x\"]}\nnot json\n");
  const auto r = cli({"ingest", "--in", dir.file("bad.jsonl"), "--out", dir.file("clean.jsonl")});
  CHECK(r.code == kExitData);
  CHECK(r.err.find(":2") != std::string::npos);
  fixtures::spit(dir.file("m.ckpt"), R"({"type":"header","format_version":99,"dimension":2,"skills":[]})" "\n");
  CHECK(cli({"rank", "--model", dir.file("m.ckpt"), "--no-idf", "--title", "x"}).code == kExitData);
}

TEST_CASE("cli ingest cleans, merges and reports rejections") {
  fixtures::TempDir dir("cli-ingest");
  fixtures::spit(dir.file("raw.jsonl"),
                 R"({"title":"Python Dev","skills":["SQL"]})"
                 "\n"
                 R"({"title":"python dev!","skills":["Python"]})"
                 "\n"
                 R"({"title":"X","skills":[]})"
                 "\n");
  const auto r = cli({"ingest", "--in", dir.file("raw.jsonl"), "--out", dir.file("clean.jsonl")});
  REQUIRE(r.code == 0);
  CHECK(fixtures::slurp(dir.file("clean.jsonl")) == R"({"title":"python dev","skills":["python","sql"]})" "\n");
  CHECK(r.err.find("1 rejected for empty skills") != std::string::npos);
}

TEST_CASE("cli pipeline: rank, eval and the IDF contrast") {
  fixtures::TempDir dir("cli-pipe");
  fixtures::PipelineOptions opts;
  opts.families = "10";
  opts.synonyms = "6";
  opts.skills = "60";
  opts.epochs = "120";
  REQUIRE(fixtures::run_pipeline(dir, opts).code == 0);

  for (const char* name : {"train.jsonl", "dev.jsonl", "test.jsonl", "labels.jsonl", "model.ckpt", "idf.jsonl"}) {
    CHECK(std::filesystem::exists(dir.file(name)));
  }
  const auto test = read_corpus(dir.file("test.jsonl"));
  REQUIRE(!test.empty());
  const std::string title = test.front().title;

  const auto ranked = cli({"rank", "--model", dir.file("model.ckpt"), "--idf", dir.file("idf.jsonl"), "--title",
                           title, "--top", "7"});
  REQUIRE(ranked.code == 0);
  const auto rows = parse_rank_output(ranked.out);
  CHECK(rows.size() == 7);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].second >= rows[i].second);

  const auto eval = cli({"eval", "--model", dir.file("model.ckpt"), "--emb", dir.file("emb.jsonl"), "--test",
                         dir.file("test.jsonl"), "--k", "20", "--report", dir.file("report.json")});
  REQUIRE(eval.code == 0);
  const double map = std::stod(eval.out);
  CHECK(map > 0.0);
  CHECK(map <= 1.0);
  CHECK(eval.out == skillrank::format_real(map) + "\n");
  const auto report = nlohmann::json::parse(fixtures::slurp(dir.file("report.json")));
  CHECK(report["k"] == 20);
  CHECK(report["mean_ap"].get<double>() == map);
  CHECK(report["per_title"].size() == test.size());

  // Generic skills sit in every training title: they top the raw ranking and
  // vanish from the boosted one.
  const auto generic = generate_synthetic_corpus({10, 6, 60, 7}).generic_skills;
  const auto raw = parse_rank_output(
      cli({"rank", "--model", dir.file("model.ckpt"), "--no-idf", "--title", title, "--top", "5"}).out);
  const auto boosted = parse_rank_output(cli({"rank", "--model", dir.file("model.ckpt"), "--idf",
                                              dir.file("idf.jsonl"), "--title", title, "--top", "5"})
                                             .out);
  REQUIRE(raw.size() == 5);
  REQUIRE(boosted.size() == 5);
  CHECK(std::find(generic.begin(), generic.end(), raw.front().first) != generic.end());
  for (const auto& [skill, score] : boosted) {
    CHECK(std::find(generic.begin(), generic.end(), skill) == generic.end());
    CHECK(score > 0.0);
  }
}

TEST_CASE("cli stages are byte-identical across runs") {
  fixtures::PipelineOptions opts;
  opts.families = "6";
  opts.synonyms = "5";
  opts.skills = "40";
  opts.epochs = "40";
  fixtures::TempDir a("cli-det-a");
  fixtures::TempDir b("cli-det-b");
  REQUIRE(fixtures::run_pipeline(a, opts).code == 0);
  REQUIRE(fixtures::run_pipeline(b, opts).code == 0);
  for (const char* name : {"corpus.jsonl", "train.jsonl", "dev.jsonl", "test.jsonl", "emb.jsonl", "labels.jsonl",
                           "model.ckpt", "history.jsonl", "idf.jsonl"}) {
    CHECK_MESSAGE(fixtures::slurp(a.file(name)) == fixtures::slurp(b.file(name)), name);
  }
}
