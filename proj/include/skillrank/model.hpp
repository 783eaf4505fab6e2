#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "skillrank/corpus.hpp"
#include "skillrank/embedding.hpp"
#include "skillrank/weaklabel.hpp"

namespace skillrank {

inline constexpr int kCheckpointFormatVersion = 1;
// Predictions are clamped to [eps, 1 - eps] inside the loss.
inline constexpr double kLossClamp = 1e-7;

// One output node per skill: importance_j = sigmoid(w_j . x + b_j).
// Weights are stored as one length-D row per skill, in skill_order.
class LinearHead {
 public:
  // Zero-initialized. Throws on duplicate skills or zero dimension.
  LinearHead(std::size_t dimension, std::vector<std::string> skill_order);

  std::size_t dimension() const { return dimension_; }
  std::size_t skill_count() const { return skill_order_.size(); }
  const std::vector<std::string>& skill_order() const { return skill_order_; }
  std::optional<std::size_t> skill_index(std::string_view skill) const;

  std::span<double> weights(std::size_t skill) { return std::span<double>(weights_).subspan(skill * dimension_, dimension_); }
  std::span<const double> weights(std::size_t skill) const {
    return std::span<const double>(weights_).subspan(skill * dimension_, dimension_);
  }
  std::span<double> all_weights() { return weights_; }
  std::span<const double> all_weights() const { return weights_; }
  std::span<double> bias() { return bias_; }
  std::span<const double> bias() const { return bias_; }

  friend bool operator==(const LinearHead&, const LinearHead&);

 private:
  std::size_t dimension_;
  std::vector<std::string> skill_order_;
  std::unordered_map<std::string, std::size_t> skill_index_;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

using ImportanceVector = std::vector<double>;

double sigmoid(double z);

std::vector<double> logits(const LinearHead& head, std::span<const double> x);
ImportanceVector forward(const LinearHead& head, std::span<const double> x);

// Dense target aligned to skill_order; keys outside it throw.
std::vector<double> dense_target(const SparseLabels& target, const LinearHead& head);

enum class LossKind { kBce, kMse };

// Mean over all skills of the soft-target binary cross-entropy (or squared
// error for kMse); absent keys are y = 0.
double bce_loss(std::span<const double> pred, std::span<const double> target);
double bce_loss(std::span<const double> pred, const SparseLabels& target, const LinearHead& head);
double mse_loss(std::span<const double> pred, std::span<const double> target);
double loss(LossKind kind, std::span<const double> pred, std::span<const double> target);

struct Sample {
  std::span<const double> x;
  std::span<const double> target;
};

struct HeadGradient {
  std::vector<double> weights;  // same layout as LinearHead::all_weights
  std::vector<double> bias;
};

// Gradient of the batch-mean loss. Samples are reduced in index order so the
// result is bit-reproducible.
HeadGradient gradient(const LinearHead& head, std::span<const Sample> batch, LossKind kind = LossKind::kBce);

struct TrainConfig {
  double learning_rate = 10.0;
  std::size_t epochs = 300;
  std::size_t batch_size = 16;
  std::uint64_t seed = 42;
  std::size_t patience = 30;
  std::size_t eval_k = 20;
  LossKind loss = LossKind::kBce;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<double> dev_map;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;
  bool early_stopped = false;
};

struct TrainResult {
  LinearHead head;
  TrainHistory history;
};

// Mini-batch gradient descent from zero weights. The batch order is
// reshuffled every epoch from one generator seeded with config.seed. With a
// non-empty dev set the parameters with the best dev MAP@k are returned and
// training stops after `patience` epochs without improvement; with an empty
// dev set the last parameters are returned.
TrainResult train_head(const WeakLabelSet& labels, const std::vector<TitleRecord>& dev, const EmbeddingStore& store,
                       const TrainConfig& config);
TrainResult train_head(const WeakLabelSet& labels, const std::vector<TitleRecord>& dev, const EmbeddingStore& store,
                       const TrainConfig& config, std::vector<std::string> skill_order);

std::string serialize_train_history(const TrainHistory& history);

std::string serialize_checkpoint(const LinearHead& head);
void save_checkpoint(const std::filesystem::path& path, const LinearHead& head);
LinearHead load_checkpoint(std::istream& in, std::string_view source = "<stream>");
LinearHead load_checkpoint(const std::filesystem::path& path);

}  // namespace skillrank
