#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skillrank {

using EmbeddingVector = std::vector<double>;

inline constexpr std::size_t kDefaultFallbackDimension = 256;
inline constexpr std::size_t kMinFallbackDimension = 16;
// Loaded vectors whose norm is within this distance of 1 are renormalized;
// anything further off is rejected.
inline constexpr double kLoadNormTolerance = 1e-3;

// Immutable-after-build map from title id to unit vector. Vectors live in one
// contiguous row-major buffer in insertion order.
class EmbeddingStore {
 public:
  EmbeddingStore(std::size_t dimension, std::string provider);

  // Normalizes `values` to unit length. Throws on dimension mismatch,
  // duplicate id, or zero vector.
  void add(std::string id, std::span<const double> values);

  std::size_t dimension() const { return dimension_; }
  const std::string& provider() const { return provider_; }
  std::size_t size() const { return ids_.size(); }
  bool contains(std::string_view id) const;
  const std::vector<std::string>& ids() const { return ids_; }

  // Throws Error(kMissingId).
  std::span<const double> at(std::string_view id) const;
  std::span<const double> row(std::size_t index) const;

 private:
  std::size_t dimension_;
  std::string provider_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

struct NeighborhoodConfig {
  double threshold = 0.75;
};

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> v);

// dot(a,b) / (|a||b|). Throws on dimension mismatch or a zero vector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Signed feature hashing of character trigrams over "^" + title + "$".
// Bucket = FNV-1a-64(trigram bytes) mod dimension; the hash's top bit set
// means the trigram contributes -1, otherwise +1. Output is L2-normalized.
EmbeddingVector fallback_embed(std::string_view title, std::size_t dimension = kDefaultFallbackDimension);

std::string fallback_provider_label(std::size_t dimension);

// Builds a store over `titles` with fallback_embed; duplicates are skipped.
EmbeddingStore embed_titles(const std::vector<std::string>& titles,
                            std::size_t dimension = kDefaultFallbackDimension);

EmbeddingStore load_embedding_store(std::istream& in, std::string_view source = "<stream>");
EmbeddingStore load_embedding_store(const std::filesystem::path& path);
std::string serialize_embedding_store(const EmbeddingStore& store);
void save_embedding_store(const std::filesystem::path& path, const EmbeddingStore& store);

// All candidates whose cosine with the anchor reaches the threshold, in
// candidate order. The anchor is always kept when it is a candidate.
std::vector<std::string> find_similar(std::string_view anchor, const EmbeddingStore& store,
                                      const std::vector<std::string>& candidates,
                                      const NeighborhoodConfig& config = {});

}  // namespace skillrank
