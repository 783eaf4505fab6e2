#pragma once

// Reference implementations used only by tests. Each one recomputes a
// library result by the most direct route available, sharing no code with
// the implementation under test beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "skillrank/corpus.hpp"
#include "skillrank/embedding.hpp"
#include "skillrank/rankeval.hpp"

namespace oracle {

// Labels by direct definition: for each title, scan all titles, keep those
// with dot >= threshold (plus itself), then count each skill by linear scan.
inline std::map<std::string, std::map<std::string, double>> weak_labels(
    const std::vector<skillrank::TitleRecord>& train, const skillrank::EmbeddingStore& store, double threshold) {
  std::map<std::string, std::map<std::string, double>> out;
  for (const auto& anchor : train) {
    const auto a = store.at(anchor.title);
    std::vector<const skillrank::TitleRecord*> hood;
    for (const auto& other : train) {
      const auto b = store.at(other.title);
      double d = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
      if (&other == &anchor || d >= threshold) hood.push_back(&other);
    }
    std::set<std::string> all;
    for (const auto* r : hood) all.insert(r->skills.begin(), r->skills.end());
    auto& labels = out[anchor.title];
    for (const auto& s : all) {
      std::size_t c = 0;
      for (const auto* r : hood) {
        if (std::find(r->skills.begin(), r->skills.end(), s) != r->skills.end()) ++c;
      }
      labels[s] = static_cast<double>(c) / static_cast<double>(hood.size());
    }
  }
  return out;
}

inline std::map<std::string, std::size_t> doc_freq(const std::vector<skillrank::TitleRecord>& train) {
  std::set<std::string> vocab;
  for (const auto& r : train) vocab.insert(r.skills.begin(), r.skills.end());
  std::map<std::string, std::size_t> out;
  for (const auto& s : vocab) {
    std::size_t c = 0;
    for (const auto& r : train) {
      if (std::count(r.skills.begin(), r.skills.end(), s) > 0) ++c;
    }
    out[s] = c;
  }
  return out;
}

// AP@k straight from the definition: precision at i recounted from scratch
// over the prefix for every hit position.
inline double average_precision(const std::vector<std::string>& ranked, const std::set<std::string>& relevant,
                                std::size_t k) {
  const std::size_t depth = std::min(k, ranked.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (!relevant.count(ranked[i])) continue;
    std::size_t hits = 0;
    for (std::size_t j = 0; j <= i; ++j) hits += relevant.count(ranked[j]);
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(std::min(relevant.size(), k));
}

// MAP over titles given full score vectors; ranking by a stable sort on a
// copy rather than partial_sort over indices.
inline double mean_average_precision(const std::vector<skillrank::TitleRecord>& test,
                                     const std::vector<std::vector<double>>& scores,
                                     const std::vector<std::string>& skill_order, std::size_t k) {
  double total = 0.0;
  for (std::size_t t = 0; t < test.size(); ++t) {
    std::vector<std::pair<double, std::string>> rows;
    for (std::size_t j = 0; j < skill_order.size(); ++j) rows.emplace_back(scores[t][j], skill_order[j]);
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    std::vector<std::string> ranked;
    for (const auto& r : rows) ranked.push_back(r.second);
    total += average_precision(ranked, std::set<std::string>(test[t].skills.begin(), test[t].skills.end()), k);
  }
  return total / static_cast<double>(test.size());
}

// Unhashed trigram-count cosine over "^" + title + "$".
inline double trigram_cosine(const std::string& a, const std::string& b) {
  auto counts = [](const std::string& t) {
    std::map<std::string, double> c;
    const std::string p = "^" + t + "$";
    for (std::size_t i = 0; i + 3 <= p.size(); ++i) c[p.substr(i, 3)] += 1.0;
    return c;
  };
  const auto ca = counts(a);
  const auto cb = counts(b);
  double d = 0, na = 0, nb = 0;
  for (const auto& [g, v] : ca) {
    na += v * v;
    if (auto it = cb.find(g); it != cb.end()) d += v * it->second;
  }
  for (const auto& [g, v] : cb) nb += v * v;
  return d / std::sqrt(na * nb);
}

}  // namespace oracle
