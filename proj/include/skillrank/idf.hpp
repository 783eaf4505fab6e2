#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skillrank/corpus.hpp"

namespace skillrank {

enum class LogBase { kE, k2, k10 };

LogBase parse_log_base(std::string_view text);
std::string_view log_base_name(LogBase base);

struct IdfOptions {
  LogBase base = LogBase::kE;
  // log((N + 1) / (f + 1)) instead of log(N / f).
  bool smooth = false;
};

struct IdfEntry {
  std::size_t doc_freq = 0;
  double idf = 0.0;
};

// Inverse document frequency over training titles: idf_s = log(N / f_s).
class IdfTable {
 public:
  IdfTable(std::size_t n_titles, IdfOptions options, std::map<std::string, IdfEntry, std::less<>> entries);

  std::size_t n_titles() const { return n_titles_; }
  const IdfOptions& options() const { return options_; }
  const std::map<std::string, IdfEntry, std::less<>>& entries() const { return entries_; }
  std::optional<IdfEntry> find(std::string_view skill) const;

 private:
  std::size_t n_titles_;
  IdfOptions options_;
  std::map<std::string, IdfEntry, std::less<>> entries_;
};

double idf_value(std::size_t n_titles, std::size_t doc_freq, const IdfOptions& options = {});

IdfTable compute_idf(const std::vector<TitleRecord>& train, const IdfOptions& options = {});

// score_j = importance_j * idf(skill_j); skills missing from the table use
// fallback_idf.
std::vector<double> boost_scores(std::span<const double> importance, const std::vector<std::string>& skill_order,
                                 const IdfTable& table, double fallback_idf = 0.0);

std::string serialize_idf(const IdfTable& table);
void save_idf(const std::filesystem::path& path, const IdfTable& table);
IdfTable load_idf(std::istream& in, std::string_view source = "<stream>");
IdfTable load_idf(const std::filesystem::path& path);

}  // namespace skillrank
