#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "skillrank/cli.hpp"

namespace fixtures {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "skillrank");
  std::ostringstream out, err;
  const int code = skillrank::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct PipelineOptions {
  std::string families = "30";
  std::string synonyms = "10";
  std::string skills = "150";
  std::string synth_seed = "7";
  std::string seed = "42";
  std::string epochs = "300";
};

// Runs synth -> split -> embed -> weaklabel -> train -> idf inside `dir`.
// Returns the first failing stage's result, or the last one.
inline CliResult run_pipeline(const TempDir& dir, const PipelineOptions& o = {}) {
  const std::vector<std::vector<std::string>> stages = {
      {"synth", "--families", o.families, "--synonyms", o.synonyms, "--skills", o.skills, "--seed", o.synth_seed,
       "--out", dir.file("corpus.jsonl")},
      {"split", "--in", dir.file("corpus.jsonl"), "--out-dir", dir.path().string(), "--seed", o.seed},
      {"embed", "--in", dir.file("corpus.jsonl"), "--out", dir.file("emb.jsonl")},
      {"weaklabel", "--train", dir.file("train.jsonl"), "--emb", dir.file("emb.jsonl"), "--out",
       dir.file("labels.jsonl")},
      {"train", "--labels", dir.file("labels.jsonl"), "--dev", dir.file("dev.jsonl"), "--emb", dir.file("emb.jsonl"),
       "--out", dir.file("model.ckpt"), "--history", dir.file("history.jsonl"), "--epochs", o.epochs, "--seed",
       o.seed},
      {"idf", "--train", dir.file("train.jsonl"), "--out", dir.file("idf.jsonl")},
  };
  CliResult last;
  for (const auto& stage : stages) {
    last = cli(stage);
    if (last.code != 0) return last;
  }
  return last;
}

}  // namespace fixtures
