#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "skillrank/corpus.hpp"
#include "skillrank/embedding.hpp"

namespace skillrank {

// Skill -> importance in (0, 1]. Absent skills are implicit zeros.
using SparseLabels = std::map<std::string, double, std::less<>>;

struct WeakLabelSet {
  double threshold = 0.75;
  std::string provider;
  // Keyed by title, so the set does not depend on training-list order.
  std::map<std::string, SparseLabels, std::less<>> labels;

  // Union of skills across all label maps, sorted.
  std::vector<std::string> skill_vocabulary() const;
};

// Fraction of neighborhood members carrying each skill.
SparseLabels relative_skill_frequencies(const std::vector<const TitleRecord*>& neighborhood);
SparseLabels relative_skill_frequencies(const std::vector<TitleRecord>& neighborhood);

// For every training title, the relative skill frequencies over its
// similar-title neighborhood drawn from the training set itself.
WeakLabelSet build_weak_labels(const std::vector<TitleRecord>& train, const EmbeddingStore& store,
                               const NeighborhoodConfig& config = {});

std::string serialize_weak_labels(const WeakLabelSet& labels);
void save_weak_labels(const std::filesystem::path& path, const WeakLabelSet& labels);
WeakLabelSet load_weak_labels(std::istream& in, std::string_view source = "<stream>");
WeakLabelSet load_weak_labels(const std::filesystem::path& path);

}  // namespace skillrank
