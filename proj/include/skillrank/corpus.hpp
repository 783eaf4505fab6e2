#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skillrank {

// A cleaned job title and the skills annotated for it. `skills` is kept
// sorted and duplicate-free so set operations are plain merges.
struct TitleRecord {
  std::string title;
  std::vector<std::string> skills;
  std::optional<std::string> lang;

  bool has_skill(std::string_view skill) const;
  friend bool operator==(const TitleRecord&, const TitleRecord&) = default;
};

struct ParseSummary {
  std::size_t lines = 0;
  std::size_t merged = 0;
  std::size_t rejected_empty_skills = 0;
  std::size_t rejected_empty_title = 0;
};

struct ParsedCorpus {
  std::vector<TitleRecord> records;
  ParseSummary summary;
};

struct DatasetSplit {
  std::vector<TitleRecord> train;
  std::vector<TitleRecord> dev;
  std::vector<TitleRecord> test;
  std::uint64_t seed = 0;
};

// Lowercases ASCII, maps every byte that is not an ASCII letter/digit, '+',
// '#', or part of a non-ASCII UTF-8 sequence to a space, then collapses and
// trims. Throws Error(kEmptyTitle) if nothing is left.
std::string normalize_title(std::string_view raw);

// Lowercase, trimmed, inner whitespace collapsed. May return "".
std::string normalize_skill(std::string_view raw);

// Reads line-delimited {"title","skills","lang"?} records. Duplicate titles
// (after normalization) merge by skill union; output keeps first-occurrence
// order.
ParsedCorpus parse_corpus(std::istream& in, std::string_view source = "<stream>");
ParsedCorpus parse_corpus(const std::vector<std::string>& lines, std::string_view source = "<lines>");
std::vector<TitleRecord> read_corpus(const std::filesystem::path& path);

std::string serialize_corpus(const std::vector<TitleRecord>& records);
void write_corpus(const std::filesystem::path& path, const std::vector<TitleRecord>& records);

// xorshift64* (Vigna 2014): state ^= state >> 12; state ^= state << 25;
// state ^= state >> 27; output = state * 0x2545F4914F6CDD1D. The seed is
// expanded through one splitmix64 step so that seed 0 is usable.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed);

  std::uint64_t next();
  // Uniform-ish integer in [0, bound) by modulo reduction; bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Double in [0, 1) from the top 53 bits.
  double uniform();

 private:
  std::uint64_t state_;
};

// Fisher-Yates from the last index down, j = rng.below(i + 1).
template <typename T>
void shuffle_in_place(std::vector<T>& items, Xorshift64Star& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

struct SplitSizes {
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
};

// floor(0.7 n), floor(0.1 n), remainder; computed in integers.
SplitSizes split_sizes(std::size_t n);

DatasetSplit split_dataset(const std::vector<TitleRecord>& records, std::uint64_t seed);

struct SyntheticConfig {
  std::size_t families = 30;
  std::size_t synonyms_per_family = 10;
  std::size_t skills = 150;
  std::uint64_t seed = 7;
  // Skills carried by every title. Capped at skills / 2.
  std::size_t generic_skills = 3;
  // Shared by all synonyms of a family.
  std::size_t core_skills_per_family = 5;
  // Drawn per title from the non-generic pool.
  std::size_t noise_skills_per_title = 2;
};

struct SyntheticCorpus {
  std::vector<TitleRecord> records;
  std::vector<std::string> generic_skills;
  // family_core[f] lists the core skills of family f; records of family f
  // occupy [f * synonyms, (f + 1) * synonyms).
  std::vector<std::vector<std::string>> family_core;
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& config);

}  // namespace skillrank
