#include "skillrank/idf.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "skillrank/error.hpp"
#include "skillrank/io.hpp"

namespace skillrank {

LogBase parse_log_base(std::string_view text) {
  if (text == "e" || text == "ln") return LogBase::kE;
  if (text == "2") return LogBase::k2;
  if (text == "10") return LogBase::k10;
  throw Error(ErrorCode::kInvalidArgument, "unknown log base \"" + std::string(text) + "\" (expected e, 2 or 10)");
}

std::string_view log_base_name(LogBase base) {
  switch (base) {
    case LogBase::kE: return "e";
    case LogBase::k2: return "2";
    case LogBase::k10: return "10";
  }
  return "e";
}

IdfTable::IdfTable(std::size_t n_titles, IdfOptions options, std::map<std::string, IdfEntry, std::less<>> entries)
    : n_titles_(n_titles), options_(options), entries_(std::move(entries)) {}

std::optional<IdfEntry> IdfTable::find(std::string_view skill) const {
  auto it = entries_.find(skill);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double idf_value(std::size_t n_titles, std::size_t doc_freq, const IdfOptions& options) {
  if (doc_freq == 0 || doc_freq > n_titles) {
    throw Error(ErrorCode::kInvalidArgument, "document frequency " + std::to_string(doc_freq) + " outside [1, " +
                                                 std::to_string(n_titles) + "]");
  }
  double ratio_num = static_cast<double>(n_titles);
  double ratio_den = static_cast<double>(doc_freq);
  if (options.smooth) {
    ratio_num += 1.0;
    ratio_den += 1.0;
  }
  // f == N must give exactly 0 in every base.
  if (doc_freq == n_titles) return 0.0;
  switch (options.base) {
    case LogBase::kE: return std::log(ratio_num / ratio_den);
    case LogBase::k2: return std::log2(ratio_num / ratio_den);
    case LogBase::k10: return std::log10(ratio_num / ratio_den);
  }
  return 0.0;
}

IdfTable compute_idf(const std::vector<TitleRecord>& train, const IdfOptions& options) {
  if (train.empty()) throw Error(ErrorCode::kEmptyInput, "cannot compute IDF over an empty training set");
  std::map<std::string, IdfEntry, std::less<>> entries;
  for (const auto& r : train) {
    // Record skills are already unique, so each title counts once per skill.
    for (const auto& s : r.skills) ++entries[s].doc_freq;
  }
  for (auto& [skill, e] : entries) e.idf = idf_value(train.size(), e.doc_freq, options);
  return IdfTable(train.size(), options, std::move(entries));
}

std::vector<double> boost_scores(std::span<const double> importance, const std::vector<std::string>& skill_order,
                                 const IdfTable& table, double fallback_idf) {
  if (importance.size() != skill_order.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "importance vector not aligned with skill order");
  }
  std::vector<double> out(importance.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto e = table.find(skill_order[j]);
    out[j] = importance[j] * (e ? e->idf : fallback_idf);
  }
  return out;
}

std::string serialize_idf(const IdfTable& table) {
  std::string out;
  Json header;
  header["type"] = "header";
  header["n_titles"] = table.n_titles();
  header["log_base"] = std::string(log_base_name(table.options().base));
  if (table.options().smooth) header["smooth"] = true;
  out += header.dump();
  out += '\n';
  for (const auto& [skill, e] : table.entries()) {
    Json rec;
    rec["type"] = "idf";
    rec["skill"] = skill;
    rec["f"] = e.doc_freq;
    rec["idf"] = e.idf;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

void save_idf(const std::filesystem::path& path, const IdfTable& table) { write_text_file(path, serialize_idf(table)); }

IdfTable load_idf(std::istream& in, std::string_view source) {
  const auto lines = read_lines(in);
  std::size_t i = 0;
  while (i < lines.size() && is_blank(lines[i])) ++i;
  if (i == lines.size()) throw Error(ErrorCode::kMissingHeader, std::string(source) + ": IDF file has no header");
  const Json header = parse_json_line(lines[i], source, i + 1);
  if (!header.is_object() || header.value("type", "") != "header" || !header.contains("n_titles") ||
      !header["n_titles"].is_number_unsigned()) {
    throw Error(ErrorCode::kMissingHeader, std::string(source) + ": first record must be a header with n_titles");
  }
  IdfOptions options;
  options.base = parse_log_base(header.value("log_base", "e"));
  options.smooth = header.value("smooth", false);
  const auto n = header["n_titles"].get<std::size_t>();

  std::map<std::string, IdfEntry, std::less<>> entries;
  for (++i; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    std::ostringstream where;
    where << source << ":" << i + 1 << ": ";
    const Json rec = parse_json_line(lines[i], source, i + 1);
    if (!rec.is_object() || rec.value("type", "") != "idf" || !rec.contains("skill") || !rec["skill"].is_string() ||
        !rec.contains("f") || !rec["f"].is_number_unsigned() || !rec.contains("idf") || !rec["idf"].is_number()) {
      throw Error(ErrorCode::kParse, where.str() + "expected {\"type\":\"idf\",\"skill\":...,\"f\":...,\"idf\":...}");
    }
    const auto skill = rec["skill"].get<std::string>();
    IdfEntry e{rec["f"].get<std::size_t>(), rec["idf"].get<double>()};
    if (e.doc_freq == 0 || e.doc_freq > n) {
      throw Error(ErrorCode::kParse, where.str() + "document frequency out of range for \"" + skill + "\"");
    }
    if (!entries.emplace(skill, e).second) {
      throw Error(ErrorCode::kDuplicateId, where.str() + "duplicate skill \"" + skill + "\"");
    }
  }
  return IdfTable(n, options, std::move(entries));
}

IdfTable load_idf(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return load_idf(in, path.string());
}

}  // namespace skillrank
