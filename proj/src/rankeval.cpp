#include "skillrank/rankeval.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "skillrank/error.hpp"
#include "skillrank/io.hpp"

namespace skillrank {

RankedSkillList rank_skills(std::span<const double> scores, const std::vector<std::string>& skill_order,
                            std::size_t top_k) {
  if (scores.size() != skill_order.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "score vector has " + std::to_string(scores.size()) +
                                                   " entries for " + std::to_string(skill_order.size()) +
                                                   " skills");
  }
  if (top_k == 0) throw Error(ErrorCode::kInvalidArgument, "top_k must be >= 1");

  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t n = std::min(top_k, idx.size());
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return skill_order[a] < skill_order[b];
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(), better);

  RankedSkillList out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({skill_order[idx[i]], scores[idx[i]]});
  return out;
}

double average_precision_at_k(const RankedSkillList& ranked, const std::vector<std::string>& relevant,
                              std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const std::unordered_set<std::string_view> rel(relevant.begin(), relevant.end());
  if (rel.empty()) throw Error(ErrorCode::kEmptyInput, "average precision with an empty relevant set");

  const std::size_t depth = std::min(k, ranked.size());
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (rel.contains(ranked[i].skill)) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(std::min(rel.size(), k));
}

EvalReport mean_average_precision(const std::vector<TitleRecord>& test, const SkillPredictor& predictor,
                                  std::size_t k) {
  if (test.empty()) throw Error(ErrorCode::kEmptyInput, "evaluation set is empty");
  EvalReport report;
  report.k = k;
  double total = 0.0;
  for (const auto& record : test) {
    if (record.skills.empty()) continue;
    double ap = 0.0;
    try {
      ap = average_precision_at_k(predictor(record), record.skills, k);
    } catch (const Error& e) {
      throw Error(e.code(), "while ranking \"" + record.title + "\": " + e.what());
    }
    report.per_title_ap[record.title] = ap;
    total += ap;
  }
  if (report.per_title_ap.empty()) throw Error(ErrorCode::kEmptyInput, "no evaluable titles");
  report.mean_ap = total / static_cast<double>(report.per_title_ap.size());
  return report;
}

std::string serialize_eval_report(const EvalReport& report) {
  Json obj;
  obj["k"] = report.k;
  obj["mean_ap"] = report.mean_ap;
  Json per = Json::object();
  for (const auto& [title, ap] : report.per_title_ap) per[title] = ap;
  obj["per_title"] = std::move(per);
  return obj.dump() + "\n";
}

}  // namespace skillrank
