#include "skillrank/cli.hpp"

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <memory>
#include <pthread.h>

#include <CLI11.hpp>

#include "skillrank/corpus.hpp"
#include "skillrank/embedding.hpp"
#include "skillrank/error.hpp"
#include "skillrank/idf.hpp"
#include "skillrank/io.hpp"
#include "skillrank/model.hpp"
#include "skillrank/rankeval.hpp"
#include "skillrank/service.hpp"
#include "skillrank/weaklabel.hpp"

namespace skillrank {

namespace {

namespace fs = std::filesystem;

struct IngestArgs {
  std::string in, out;
};
struct SplitArgs {
  std::string in, out_dir;
  std::uint64_t seed = 42;
};
struct SynthArgs {
  SyntheticConfig config;
  std::string out;
};
struct EmbedArgs {
  std::vector<std::string> in;
  std::string out;
  std::size_t dim = kDefaultFallbackDimension;
};
struct WeakLabelArgs {
  std::string train, emb, out;
  double threshold = 0.75;
};
struct TrainArgs {
  std::string labels, dev, emb, out, history, loss = "bce";
  TrainConfig config;
};
struct IdfArgs {
  std::string train, out, log_base = "e";
  bool smooth = false;
};
struct RankArgs {
  std::string model, idf, emb, title;
  std::size_t top = 20;
  bool no_idf = false;
  double unseen_idf = 0.0;
};
struct EvalArgs {
  std::string model, emb, test, idf, report;
  std::size_t k = kDefaultEvalCutoff;
  double unseen_idf = 0.0;
};
struct ServeArgs {
  std::string model, idf, emb, host = "127.0.0.1";
  int port = 8080;
  double unseen_idf = 0.0;
};

std::optional<EmbeddingStore> maybe_store(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_embedding_store(fs::path(path));
}

std::optional<IdfTable> maybe_idf(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_idf(fs::path(path));
}

int do_ingest(const IngestArgs& a, std::ostream& err) {
  const auto lines = read_lines(fs::path(a.in));
  const auto parsed = parse_corpus(lines, a.in);
  write_corpus(a.out, parsed.records);
  err << "ingest: " << parsed.records.size() << " records from " << parsed.summary.lines << " lines ("
      << parsed.summary.merged << " merged, " << parsed.summary.rejected_empty_skills << " rejected for empty skills, "
      << parsed.summary.rejected_empty_title << " rejected for empty titles)\n";
  return kExitOk;
}

int do_split(const SplitArgs& a, std::ostream& err) {
  const auto split = split_dataset(read_corpus(a.in), a.seed);
  fs::create_directories(a.out_dir);
  write_corpus(fs::path(a.out_dir) / "train.jsonl", split.train);
  write_corpus(fs::path(a.out_dir) / "dev.jsonl", split.dev);
  write_corpus(fs::path(a.out_dir) / "test.jsonl", split.test);
  err << "split: train " << split.train.size() << ", dev " << split.dev.size() << ", test " << split.test.size()
      << " (seed " << a.seed << ")\n";
  return kExitOk;
}

int do_synth(const SynthArgs& a, std::ostream& err) {
  const auto corpus = generate_synthetic_corpus(a.config);
  write_corpus(a.out, corpus.records);
  err << "synth: " << corpus.records.size() << " records, " << corpus.generic_skills.size() << " generic skills\n";
  return kExitOk;
}

int do_embed(const EmbedArgs& a, std::ostream& err) {
  std::vector<std::string> titles;
  for (const auto& path : a.in) {
    for (const auto& r : read_corpus(path)) titles.push_back(r.title);
  }
  const auto store = embed_titles(titles, a.dim);
  save_embedding_store(a.out, store);
  err << "embed: " << store.size() << " vectors of dimension " << store.dimension() << " (" << store.provider()
      << ")\n";
  return kExitOk;
}

int do_weaklabel(const WeakLabelArgs& a, std::ostream& err) {
  const auto train = read_corpus(a.train);
  const auto store = load_embedding_store(fs::path(a.emb));
  const auto labels = build_weak_labels(train, store, NeighborhoodConfig{a.threshold});
  save_weak_labels(a.out, labels);
  err << "weaklabel: " << labels.labels.size() << " titles labeled at threshold " << format_real(a.threshold)
      << "\n";
  return kExitOk;
}

int do_train(TrainArgs a, std::ostream& err) {
  if (a.loss == "mse") {
    a.config.loss = LossKind::kMse;
  } else if (a.loss != "bce") {
    throw Error(ErrorCode::kInvalidArgument, "unknown loss \"" + a.loss + "\"");
  }
  const auto labels = load_weak_labels(fs::path(a.labels));
  const std::vector<TitleRecord> dev = a.dev.empty() ? std::vector<TitleRecord>{} : read_corpus(a.dev);
  const auto store = load_embedding_store(fs::path(a.emb));
  const auto result = train_head(labels, dev, store, a.config);
  save_checkpoint(a.out, result.head);
  if (!a.history.empty()) write_text_file(a.history, serialize_train_history(result.history));
  const auto& epochs = result.history.epochs;
  err << "train: " << epochs.size() << " epochs, best epoch " << result.history.best_epoch;
  if (!epochs.empty()) {
    const auto& best = epochs[result.history.best_epoch - 1];
    err << ", train loss " << format_real(best.train_loss);
    if (best.dev_map) err << ", dev MAP@" << a.config.eval_k << " " << format_real(*best.dev_map);
  }
  err << "\n";
  return kExitOk;
}

int do_idf(const IdfArgs& a, std::ostream& err) {
  IdfOptions options{parse_log_base(a.log_base), a.smooth};
  const auto table = compute_idf(read_corpus(a.train), options);
  save_idf(a.out, table);
  err << "idf: " << table.entries().size() << " skills over " << table.n_titles() << " titles\n";
  return kExitOk;
}

int do_rank(const RankArgs& a, std::ostream& out) {
  SkillRanker ranker(load_checkpoint(fs::path(a.model)), maybe_idf(a.idf), maybe_store(a.emb), a.unseen_idf);
  for (const auto& e : ranker.rank(a.title, a.top, !a.no_idf)) {
    out << e.skill << '\t' << format_real(e.score) << '\n';
  }
  return kExitOk;
}

int do_eval(const EvalArgs& a, std::ostream& out) {
  const auto test = read_corpus(a.test);
  SkillRanker ranker(load_checkpoint(fs::path(a.model)), maybe_idf(a.idf), maybe_store(a.emb), a.unseen_idf);
  const bool use_idf = ranker.has_idf();
  const auto report = mean_average_precision(
      test,
      [&](const TitleRecord& r) {
        return rank_skills(ranker.scores(r.title, use_idf), ranker.head().skill_order(), a.k);
      },
      a.k);
  if (!a.report.empty()) write_text_file(a.report, serialize_eval_report(report));
  out << format_real(report.mean_ap) << '\n';
  return kExitOk;
}

int do_serve(const ServeArgs& a, std::ostream& err) {
  // Signals are consumed by a dedicated thread; every other thread
  // (including the server's workers) inherits the blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ServiceHost host;
  const int port = host.bind(a.host, a.port);
  host.start();
  err << "serve: listening on " << a.host << ":" << port << "\n";
  try {
    host.publish(std::make_unique<const SkillRanker>(load_checkpoint(fs::path(a.model)), maybe_idf(a.idf),
                                                     maybe_store(a.emb), a.unseen_idf));
  } catch (...) {
    host.stop();
    throw;
  }
  err << "serve: model loaded\n";
  int sig = 0;
  sigwait(&signals, &sig);
  host.stop();
  err << "serve: stopped\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skill-importance ranking for job titles"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Clean and deduplicate a raw corpus");
  c_ingest->add_option("--in", ingest.in, "Raw line-delimited corpus")->required();
  c_ingest->add_option("--out", ingest.out, "Cleaned corpus")->required();

  SplitArgs split;
  auto* c_split = app.add_subcommand("split", "Split a corpus 70:10:20 into train/dev/test");
  c_split->add_option("--in", split.in, "Cleaned corpus")->required();
  c_split->add_option("--out-dir", split.out_dir, "Directory for train/dev/test.jsonl")->required();
  c_split->add_option("--seed", split.seed, "Shuffle seed")->capture_default_str();

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  c_synth->add_option("--families", synth.config.families)->capture_default_str();
  c_synth->add_option("--synonyms", synth.config.synonyms_per_family)->capture_default_str();
  c_synth->add_option("--skills", synth.config.skills)->capture_default_str();
  c_synth->add_option("--generic", synth.config.generic_skills)->capture_default_str();
  c_synth->add_option("--core", synth.config.core_skills_per_family)->capture_default_str();
  c_synth->add_option("--noise", synth.config.noise_skills_per_title)->capture_default_str();
  synth.config.seed = 42;
  c_synth->add_option("--seed", synth.config.seed)->capture_default_str();
  c_synth->add_option("--out", synth.out)->required();

  EmbedArgs embed;
  auto* c_embed = app.add_subcommand("embed", "Embed corpus titles with the built-in trigram embedder");
  c_embed->add_option("--in", embed.in, "One or more corpus files")->required();
  c_embed->add_option("--out", embed.out, "Embedding interchange file")->required();
  c_embed->add_option("--dim", embed.dim)->capture_default_str()->check(CLI::Range(kMinFallbackDimension, std::size_t{1} << 20));

  WeakLabelArgs weak;
  auto* c_weak = app.add_subcommand("weaklabel", "Build weak importance labels from similar-title neighborhoods");
  c_weak->add_option("--train", weak.train)->required();
  c_weak->add_option("--emb", weak.emb, "Embeddings used for neighborhoods")->required();
  c_weak->add_option("--threshold", weak.threshold)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  c_weak->add_option("--out", weak.out)->required();

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train the linear importance head");
  c_train->add_option("--labels", train.labels)->required();
  c_train->add_option("--dev", train.dev, "Dev corpus for early stopping");
  c_train->add_option("--emb", train.emb, "Embeddings used as model input")->required();
  c_train->add_option("--out", train.out, "Checkpoint file")->required();
  c_train->add_option("--history", train.history, "Per-epoch history file");
  c_train->add_option("--lr", train.config.learning_rate)->capture_default_str();
  c_train->add_option("--epochs", train.config.epochs)->capture_default_str();
  c_train->add_option("--batch", train.config.batch_size)->capture_default_str();
  c_train->add_option("--patience", train.config.patience)->capture_default_str();
  c_train->add_option("--k", train.config.eval_k)->capture_default_str();
  c_train->add_option("--seed", train.config.seed)->capture_default_str();
  c_train->add_option("--loss", train.loss)->capture_default_str()->check(CLI::IsMember({"bce", "mse"}));

  IdfArgs idf;
  auto* c_idf = app.add_subcommand("idf", "Compute per-skill IDF over the training corpus");
  c_idf->add_option("--train", idf.train)->required();
  c_idf->add_option("--out", idf.out)->required();
  c_idf->add_option("--log-base", idf.log_base)->capture_default_str()->check(CLI::IsMember({"e", "2", "10"}));
  c_idf->add_flag("--smooth", idf.smooth, "Use log((N+1)/(f+1))");

  RankArgs rank;
  auto* c_rank = app.add_subcommand("rank", "Rank skills for one title");
  c_rank->add_option("--model", rank.model)->required();
  c_rank->add_option("--idf", rank.idf);
  c_rank->add_option("--emb", rank.emb, "Optional store; unknown titles use the fallback embedder");
  c_rank->add_option("--title", rank.title)->required();
  c_rank->add_option("--top", rank.top)->capture_default_str()->check(CLI::PositiveNumber);
  c_rank->add_option("--unseen-idf", rank.unseen_idf)->capture_default_str();
  c_rank->add_flag("--no-idf", rank.no_idf, "Rank by raw model importance");

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Mean average precision at k over a test corpus");
  c_eval->add_option("--model", eval.model)->required();
  c_eval->add_option("--emb", eval.emb);
  c_eval->add_option("--test", eval.test)->required();
  c_eval->add_option("--idf", eval.idf, "Rank by IDF-boosted scores");
  c_eval->add_option("--k", eval.k)->capture_default_str()->check(CLI::PositiveNumber);
  c_eval->add_option("--unseen-idf", eval.unseen_idf)->capture_default_str();
  c_eval->add_option("--report", eval.report, "Write the full report as JSON");

  ServeArgs serve;
  auto* c_serve = app.add_subcommand("serve", "Serve POST /rank and GET /healthz");
  c_serve->add_option("--model", serve.model)->required();
  c_serve->add_option("--idf", serve.idf);
  c_serve->add_option("--emb", serve.emb);
  c_serve->add_option("--host", serve.host)->capture_default_str();
  c_serve->add_option("--port", serve.port)->capture_default_str()->check(CLI::Range(0, 65535));
  c_serve->add_option("--unseen-idf", serve.unseen_idf)->capture_default_str();

  std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (*c_rank && rank.idf.empty() && !rank.no_idf) {
    err << "error: rank needs --idf, or --no-idf to rank by raw importance\n";
    return kExitUsage;
  }

  try {
    if (*c_ingest) return do_ingest(ingest, err);
    if (*c_split) return do_split(split, err);
    if (*c_synth) return do_synth(synth, err);
    if (*c_embed) return do_embed(embed, err);
    if (*c_weak) return do_weaklabel(weak, err);
    if (*c_train) return do_train(train, err);
    if (*c_idf) return do_idf(idf, err);
    if (*c_rank) return do_rank(rank, out);
    if (*c_eval) return do_eval(eval, out);
    if (*c_serve) return do_serve(serve, err);
  } catch (const Error& e) {
    err << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace skillrank
