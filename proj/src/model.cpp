#include "skillrank/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "skillrank/error.hpp"
#include "skillrank/io.hpp"
#include "skillrank/rankeval.hpp"

namespace skillrank {

LinearHead::LinearHead(std::size_t dimension, std::vector<std::string> skill_order)
    : dimension_(dimension), skill_order_(std::move(skill_order)) {
  if (dimension_ == 0) throw Error(ErrorCode::kInvalidArgument, "head dimension must be positive");
  for (std::size_t j = 0; j < skill_order_.size(); ++j) {
    if (!skill_index_.emplace(skill_order_[j], j).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate skill \"" + skill_order_[j] + "\" in skill order");
    }
  }
  weights_.assign(dimension_ * skill_order_.size(), 0.0);
  bias_.assign(skill_order_.size(), 0.0);
}

std::optional<std::size_t> LinearHead::skill_index(std::string_view skill) const {
  auto it = skill_index_.find(std::string(skill));
  if (it == skill_index_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const LinearHead& a, const LinearHead& b) {
  return a.dimension_ == b.dimension_ && a.skill_order_ == b.skill_order_ && a.weights_ == b.weights_ &&
         a.bias_ == b.bias_;
}

double sigmoid(double z) {
  // Saturated logits are pinned just inside (0, 1).
  constexpr double kLo = std::numeric_limits<double>::min();
  constexpr double kHi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  if (z >= 0.0) return std::min(1.0 / (1.0 + std::exp(-z)), kHi);
  const double e = std::exp(z);
  return std::max(e / (1.0 + e), kLo);
}

std::vector<double> logits(const LinearHead& head, std::span<const double> x) {
  if (x.size() != head.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "input has dimension " + std::to_string(x.size()) +
                                                   ", head expects " + std::to_string(head.dimension()));
  }
  std::vector<double> z(head.skill_count());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = dot(head.weights(j), x) + head.bias()[j];
  return z;
}

ImportanceVector forward(const LinearHead& head, std::span<const double> x) {
  auto out = logits(head, x);
  for (double& v : out) v = sigmoid(v);
  return out;
}

std::vector<double> dense_target(const SparseLabels& target, const LinearHead& head) {
  std::vector<double> y(head.skill_count(), 0.0);
  for (const auto& [skill, value] : target) {
    const auto j = head.skill_index(skill);
    if (!j) throw Error(ErrorCode::kInvalidArgument, "target skill \"" + skill + "\" is not in the skill order");
    y[*j] = value;
  }
  return y;
}

double bce_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "prediction and target lengths differ");
  }
  if (pred.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < pred.size(); ++j) {
    const double p = std::clamp(pred[j], kLossClamp, 1.0 - kLossClamp);
    const double y = target[j];
    sum -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
  }
  return sum / static_cast<double>(pred.size());
}

double bce_loss(std::span<const double> pred, const SparseLabels& target, const LinearHead& head) {
  return bce_loss(pred, dense_target(target, head));
}

double mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "prediction and target lengths differ");
  }
  if (pred.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < pred.size(); ++j) {
    const double d = pred[j] - target[j];
    sum += d * d;
  }
  return sum / static_cast<double>(pred.size());
}

double loss(LossKind kind, std::span<const double> pred, std::span<const double> target) {
  return kind == LossKind::kBce ? bce_loss(pred, target) : mse_loss(pred, target);
}

HeadGradient gradient(const LinearHead& head, std::span<const Sample> batch, LossKind kind) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyInput, "gradient of an empty batch");
  const std::size_t d = head.dimension();
  const std::size_t s = head.skill_count();
  HeadGradient g{std::vector<double>(d * s, 0.0), std::vector<double>(s, 0.0)};
  const double scale = 1.0 / (static_cast<double>(s) * static_cast<double>(batch.size()));

  for (const Sample& sample : batch) {
    if (sample.target.size() != s) throw Error(ErrorCode::kDimensionMismatch, "target length differs from skill count");
    const auto p = forward(head, sample.x);
    for (std::size_t j = 0; j < s; ++j) {
      double dz = p[j] - sample.target[j];
      if (kind == LossKind::kMse) dz = 2.0 * dz * p[j] * (1.0 - p[j]);
      dz *= scale;
      g.bias[j] += dz;
      double* row = g.weights.data() + j * d;
      for (std::size_t i = 0; i < d; ++i) row[i] += dz * sample.x[i];
    }
  }
  return g;
}

namespace {

double mean_loss(const LinearHead& head, const std::vector<Sample>& samples, LossKind kind) {
  double total = 0.0;
  for (const auto& s : samples) total += loss(kind, forward(head, s.x), s.target);
  return total / static_cast<double>(samples.size());
}

double dev_map(const LinearHead& head, const std::vector<TitleRecord>& dev, const EmbeddingStore& store,
               std::size_t k) {
  const auto report = mean_average_precision(
      dev, [&](const TitleRecord& r) { return rank_skills(forward(head, store.at(r.title)), head.skill_order(), k); },
      k);
  return report.mean_ap;
}

void validate(const TrainConfig& c) {
  if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  if (c.epochs == 0 || c.batch_size == 0 || c.patience == 0 || c.eval_k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "epochs, batch size, patience and k must be positive");
  }
  if (c.patience > c.epochs) throw Error(ErrorCode::kInvalidArgument, "patience must not exceed epochs");
}

}  // namespace

TrainResult train_head(const WeakLabelSet& labels, const std::vector<TitleRecord>& dev, const EmbeddingStore& store,
                       const TrainConfig& config) {
  return train_head(labels, dev, store, config, labels.skill_vocabulary());
}

TrainResult train_head(const WeakLabelSet& labels, const std::vector<TitleRecord>& dev, const EmbeddingStore& store,
                       const TrainConfig& config, std::vector<std::string> skill_order) {
  validate(config);
  if (labels.labels.empty()) throw Error(ErrorCode::kEmptyInput, "no training labels");

  LinearHead head(store.dimension(), std::move(skill_order));

  std::vector<std::vector<double>> targets;
  std::vector<Sample> samples;
  targets.reserve(labels.labels.size());
  for (const auto& [title, sparse] : labels.labels) {
    if (!store.contains(title)) {
      throw Error(ErrorCode::kMissingId, "training title \"" + title + "\" has no embedding");
    }
    targets.push_back(dense_target(sparse, head));
  }
  {
    std::size_t i = 0;
    for (const auto& [title, sparse] : labels.labels) samples.push_back({store.at(title), targets[i++]});
  }
  for (const auto& r : dev) {
    if (!store.contains(r.title)) throw Error(ErrorCode::kMissingId, "dev title \"" + r.title + "\" has no embedding");
  }

  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Xorshift64Star rng(config.seed);

  TrainResult result{head, {}};
  std::optional<double> best_dev;
  std::size_t since_best = 0;
  std::vector<Sample> batch;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_in_place(order, rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(samples[order[i]]);
      const HeadGradient g = gradient(head, batch, config.loss);
      auto w = head.all_weights();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= config.learning_rate * g.weights[i];
      auto b = head.bias();
      for (std::size_t j = 0; j < b.size(); ++j) b[j] -= config.learning_rate * g.bias[j];
    }

    EpochStats stats{epoch, mean_loss(head, samples, config.loss), std::nullopt};
    if (!dev.empty()) {
      stats.dev_map = dev_map(head, dev, store, config.eval_k);
      if (!best_dev || *stats.dev_map > *best_dev) {
        best_dev = stats.dev_map;
        result.head = head;
        result.history.best_epoch = epoch;
        since_best = 0;
      } else {
        ++since_best;
      }
    }
    result.history.epochs.push_back(stats);
    if (!dev.empty() && since_best >= config.patience) {
      result.history.early_stopped = true;
      break;
    }
  }
  if (dev.empty()) {
    result.head = head;
    result.history.best_epoch = result.history.epochs.size();
  }
  return result;
}

std::string serialize_train_history(const TrainHistory& history) {
  std::string out;
  for (const auto& e : history.epochs) {
    Json rec;
    rec["epoch"] = e.epoch;
    rec["train_loss"] = e.train_loss;
    rec["dev_map"] = e.dev_map ? Json(*e.dev_map) : Json(nullptr);
    rec["best"] = e.epoch == history.best_epoch;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::string serialize_checkpoint(const LinearHead& head) {
  for (double v : head.all_weights()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "refusing to save non-finite weights");
  }
  for (double v : head.bias()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "refusing to save non-finite bias");
  }
  std::string out;
  Json header;
  header["type"] = "header";
  header["format_version"] = kCheckpointFormatVersion;
  header["dimension"] = head.dimension();
  header["skills"] = head.skill_order();
  header["activation"] = "sigmoid";
  out += header.dump();
  out += '\n';
  for (std::size_t j = 0; j < head.skill_count(); ++j) {
    out += R"({"type":"row","skill":)";
    out += Json(head.skill_order()[j]).dump();
    out += R"(,"w":[)";
    const auto w = head.weights(j);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ',';
      out += format_real(w[i]);
    }
    out += R"(],"b":)";
    out += format_real(head.bias()[j]);
    out += "}\n";
  }
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const LinearHead& head) {
  write_text_file(path, serialize_checkpoint(head));
}

LinearHead load_checkpoint(std::istream& in, std::string_view source) {
  const auto lines = read_lines(in);
  std::size_t i = 0;
  while (i < lines.size() && is_blank(lines[i])) ++i;
  if (i == lines.size()) throw Error(ErrorCode::kMissingHeader, std::string(source) + ": checkpoint has no header");

  const Json header = parse_json_line(lines[i], source, i + 1);
  if (!header.is_object() || header.value("type", "") != "header") {
    throw Error(ErrorCode::kMissingHeader, std::string(source) + ": first record must be a header");
  }
  if (!header.contains("format_version") || !header["format_version"].is_number_integer()) {
    throw Error(ErrorCode::kCorruptCheckpoint, std::string(source) + ": header lacks format_version");
  }
  const auto version = header["format_version"].get<long long>();
  if (version != kCheckpointFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, std::string(source) + ": unsupported checkpoint format_version " +
                                                    std::to_string(version));
  }
  if (header.value("activation", "sigmoid") != "sigmoid") {
    throw Error(ErrorCode::kCorruptCheckpoint, std::string(source) + ": unsupported activation");
  }
  if (!header.contains("dimension") || !header["dimension"].is_number_unsigned() || !header.contains("skills") ||
      !header["skills"].is_array()) {
    throw Error(ErrorCode::kCorruptCheckpoint, std::string(source) + ": header needs dimension and skills");
  }
  const auto dimension = header["dimension"].get<std::size_t>();
  std::vector<std::string> skills;
  for (const auto& s : header["skills"]) {
    if (!s.is_string()) throw Error(ErrorCode::kCorruptCheckpoint, std::string(source) + ": non-string skill id");
    skills.push_back(s.get<std::string>());
  }
  std::optional<LinearHead> built;
  try {
    built.emplace(dimension, skills);
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptCheckpoint, std::string(source) + ": " + e.what());
  }
  LinearHead& head = *built;

  std::size_t row = 0;
  for (++i; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    std::ostringstream where;
    where << source << ":" << i + 1 << ": ";
    const Json rec = parse_json_line(lines[i], source, i + 1);
    if (!rec.is_object() || rec.value("type", "") != "row" || !rec.contains("skill") || !rec["skill"].is_string() ||
        !rec.contains("w") || !rec["w"].is_array() || !rec.contains("b") || !rec["b"].is_number()) {
      throw Error(ErrorCode::kCorruptCheckpoint, where.str() + "malformed row record");
    }
    const auto skill = rec["skill"].get<std::string>();
    if (row >= head.skill_count()) {
      throw Error(ErrorCode::kCorruptCheckpoint, where.str() + "extra row for skill \"" + skill + "\"");
    }
    if (skill != head.skill_order()[row]) {
      throw Error(ErrorCode::kCorruptCheckpoint, where.str() + "row for \"" + skill + "\" out of order, expected \"" +
                                                     head.skill_order()[row] + "\"");
    }
    const auto& w = rec["w"];
    if (w.size() != dimension) {
      throw Error(ErrorCode::kCorruptCheckpoint, where.str() + "weight row for skill \"" + skill + "\" has length " +
                                                     std::to_string(w.size()) + ", expected " +
                                                     std::to_string(dimension));
    }
    auto dst = head.weights(row);
    for (std::size_t k = 0; k < dimension; ++k) {
      if (!w[k].is_number()) {
        throw Error(ErrorCode::kCorruptCheckpoint, where.str() + "non-numeric weight for skill \"" + skill + "\"");
      }
      dst[k] = w[k].get<double>();
    }
    head.bias()[row] = rec["b"].get<double>();
    ++row;
  }
  if (row != head.skill_count()) {
    throw Error(ErrorCode::kCorruptCheckpoint, std::string(source) + ": expected " +
                                                   std::to_string(head.skill_count()) + " rows, found " +
                                                   std::to_string(row));
  }
  return std::move(head);
}

LinearHead load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return load_checkpoint(in, path.string());
}

}  // namespace skillrank
