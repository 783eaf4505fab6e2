#include "skillrank/weaklabel.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "skillrank/error.hpp"
#include "skillrank/io.hpp"

namespace skillrank {

std::vector<std::string> WeakLabelSet::skill_vocabulary() const {
  std::set<std::string, std::less<>> all;
  for (const auto& [title, skills] : labels) {
    for (const auto& [skill, value] : skills) all.insert(skill);
  }
  return {all.begin(), all.end()};
}

SparseLabels relative_skill_frequencies(const std::vector<const TitleRecord*>& neighborhood) {
  if (neighborhood.empty()) {
    throw Error(ErrorCode::kEmptyInput, "relative skill frequencies of an empty neighborhood");
  }
  std::map<std::string, std::size_t, std::less<>> counts;
  for (const TitleRecord* r : neighborhood) {
    for (const auto& s : r->skills) ++counts[s];
  }
  const auto n = static_cast<double>(neighborhood.size());
  SparseLabels out;
  for (const auto& [skill, count] : counts) {
    out.emplace_hint(out.end(), skill, static_cast<double>(count) / n);
  }
  return out;
}

SparseLabels relative_skill_frequencies(const std::vector<TitleRecord>& neighborhood) {
  std::vector<const TitleRecord*> ptrs;
  ptrs.reserve(neighborhood.size());
  for (const auto& r : neighborhood) ptrs.push_back(&r);
  return relative_skill_frequencies(ptrs);
}

WeakLabelSet build_weak_labels(const std::vector<TitleRecord>& train, const EmbeddingStore& store,
                               const NeighborhoodConfig& config) {
  if (!(config.threshold > 0.0 && config.threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1]");
  }
  std::vector<std::span<const double>> rows;
  rows.reserve(train.size());
  std::unordered_set<std::string_view> seen;
  for (const auto& r : train) {
    if (!seen.insert(r.title).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate training title \"" + r.title + "\"");
    }
    if (!store.contains(r.title)) {
      throw Error(ErrorCode::kMissingId, "training title \"" + r.title + "\" has no embedding in store \"" +
                                             store.provider() + "\"");
    }
    rows.push_back(store.at(r.title));
  }

  WeakLabelSet out;
  out.threshold = config.threshold;
  out.provider = store.provider();
  std::vector<const TitleRecord*> neighborhood;
  for (std::size_t i = 0; i < train.size(); ++i) {
    neighborhood.clear();
    // Same predicate as find_similar over the training titles.
    for (std::size_t j = 0; j < train.size(); ++j) {
      if (i == j || dot(rows[i], rows[j]) >= config.threshold) neighborhood.push_back(&train[j]);
    }
    out.labels.emplace(train[i].title, relative_skill_frequencies(neighborhood));
  }
  return out;
}

std::string serialize_weak_labels(const WeakLabelSet& labels) {
  std::string out;
  Json header;
  header["type"] = "header";
  header["threshold"] = labels.threshold;
  header["provider"] = labels.provider;
  out += header.dump();
  out += '\n';
  for (const auto& [title, skills] : labels.labels) {
    Json rec;
    rec["type"] = "labels";
    rec["id"] = title;
    Json map = Json::object();
    for (const auto& [skill, value] : skills) map[skill] = value;
    rec["skills"] = std::move(map);
    out += rec.dump();
    out += '\n';
  }
  return out;
}

void save_weak_labels(const std::filesystem::path& path, const WeakLabelSet& labels) {
  write_text_file(path, serialize_weak_labels(labels));
}

WeakLabelSet load_weak_labels(std::istream& in, std::string_view source) {
  const auto lines = read_lines(in);
  std::size_t i = 0;
  while (i < lines.size() && is_blank(lines[i])) ++i;
  if (i == lines.size()) {
    throw Error(ErrorCode::kMissingHeader, std::string(source) + ": weak-label file has no header");
  }
  const Json header = parse_json_line(lines[i], source, i + 1);
  if (!header.is_object() || header.value("type", "") != "header" || !header.contains("threshold") ||
      !header["threshold"].is_number()) {
    throw Error(ErrorCode::kMissingHeader, std::string(source) + ": first record must be a header with a threshold");
  }
  WeakLabelSet out;
  out.threshold = header["threshold"].get<double>();
  out.provider = header.value("provider", "");

  for (++i; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const Json rec = parse_json_line(lines[i], source, i + 1);
    std::ostringstream where;
    where << source << ":" << i + 1 << ": ";
    if (!rec.is_object() || rec.value("type", "") != "labels" || !rec.contains("id") || !rec["id"].is_string() ||
        !rec.contains("skills") || !rec["skills"].is_object()) {
      throw Error(ErrorCode::kParse, where.str() + "expected {\"type\":\"labels\",\"id\":...,\"skills\":{...}}");
    }
    SparseLabels skills;
    for (const auto& [skill, value] : rec["skills"].items()) {
      if (!value.is_number()) throw Error(ErrorCode::kParse, where.str() + "non-numeric label for \"" + skill + "\"");
      const double v = value.get<double>();
      if (!(v > 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::kParse, where.str() + "label for \"" + skill + "\" outside (0, 1]");
      }
      skills.emplace(skill, v);
    }
    if (skills.empty()) throw Error(ErrorCode::kParse, where.str() + "empty label map");
    const auto id = rec["id"].get<std::string>();
    if (!out.labels.emplace(id, std::move(skills)).second) {
      throw Error(ErrorCode::kDuplicateId, where.str() + "duplicate title id \"" + id + "\"");
    }
  }
  return out;
}

WeakLabelSet load_weak_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return load_weak_labels(in, path.string());
}

}  // namespace skillrank
