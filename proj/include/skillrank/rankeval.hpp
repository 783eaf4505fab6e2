#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "skillrank/corpus.hpp"

namespace skillrank {

inline constexpr std::size_t kDefaultEvalCutoff = 20;

struct RankedEntry {
  std::string skill;
  double score = 0.0;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

// Descending by score; equal scores ordered by skill id ascending.
using RankedSkillList = std::vector<RankedEntry>;

RankedSkillList rank_skills(std::span<const double> scores, const std::vector<std::string>& skill_order,
                            std::size_t top_k);

// AP@k = (1 / min(|relevant|, k)) * sum over hit positions i <= k of
// (hits in top i) / i. Throws on an empty relevant set or k == 0.
double average_precision_at_k(const RankedSkillList& ranked, const std::vector<std::string>& relevant,
                              std::size_t k);

struct EvalReport {
  std::size_t k = kDefaultEvalCutoff;
  std::map<std::string, double> per_title_ap;
  double mean_ap = 0.0;
};

using SkillPredictor = std::function<RankedSkillList(const TitleRecord&)>;

// Relevant set per title is its annotated skills. Predictor failures are
// rethrown with the title attached.
EvalReport mean_average_precision(const std::vector<TitleRecord>& test, const SkillPredictor& predictor,
                                  std::size_t k = kDefaultEvalCutoff);

std::string serialize_eval_report(const EvalReport& report);

}  // namespace skillrank
