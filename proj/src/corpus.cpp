#include "skillrank/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "skillrank/error.hpp"
#include "skillrank/io.hpp"

namespace skillrank {

namespace {

bool is_title_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '+' || c == '#' || c >= 0x80;
}

unsigned char ascii_lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<unsigned char>(c - 'A' + 'a') : c;
}

// Collapses runs of spaces and trims; input already has every separator
// mapped to ' '.
std::string collapse_spaces(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

void merge_skills(std::vector<std::string>& into, const std::vector<std::string>& from) {
  std::vector<std::string> merged;
  merged.reserve(into.size() + from.size());
  std::set_union(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(merged));
  into = std::move(merged);
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

bool TitleRecord::has_skill(std::string_view skill) const {
  return std::binary_search(skills.begin(), skills.end(), skill);
}

std::string normalize_title(std::string_view raw) {
  std::string mapped;
  mapped.reserve(raw.size());
  for (char ch : raw) {
    const auto c = ascii_lower(static_cast<unsigned char>(ch));
    mapped.push_back(is_title_char(c) ? static_cast<char>(c) : ' ');
  }
  std::string out = collapse_spaces(mapped);
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyTitle, "title is empty after normalization: \"" + std::string(raw) + "\"");
  }
  return out;
}

std::string normalize_skill(std::string_view raw) {
  std::string mapped;
  mapped.reserve(raw.size());
  for (char ch : raw) {
    const auto c = ascii_lower(static_cast<unsigned char>(ch));
    mapped.push_back((c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') ? ' ' : static_cast<char>(c));
  }
  return collapse_spaces(mapped);
}

ParsedCorpus parse_corpus(const std::vector<std::string>& lines, std::string_view source) {
  ParsedCorpus result;
  std::unordered_map<std::string, std::size_t> index_of;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (is_blank(line)) continue;
    const std::size_t line_no = i + 1;
    ++result.summary.lines;

    const Json obj = parse_json_line(line, source, line_no);
    auto fail = [&](const std::string& what) {
      std::ostringstream msg;
      msg << source << ":" << line_no << ": " << what;
      throw Error(ErrorCode::kParse, msg.str());
    };
    if (!obj.is_object()) fail("record is not an object");
    if (!obj.contains("title") || !obj["title"].is_string()) fail("missing string field \"title\"");
    if (!obj.contains("skills") || !obj["skills"].is_array()) fail("missing array field \"skills\"");

    std::optional<std::string> lang;
    if (obj.contains("lang") && !obj["lang"].is_null()) {
      if (!obj["lang"].is_string()) fail("field \"lang\" is not a string");
      lang = obj["lang"].get<std::string>();
    }

    std::vector<std::string> skills;
    for (const auto& s : obj["skills"]) {
      if (!s.is_string()) fail("non-string entry in \"skills\"");
      std::string skill = normalize_skill(s.get<std::string>());
      if (!skill.empty()) skills.push_back(std::move(skill));
    }
    sort_unique(skills);

    std::string title;
    try {
      title = normalize_title(obj["title"].get<std::string>());
    } catch (const Error&) {
      ++result.summary.rejected_empty_title;
      continue;
    }
    if (skills.empty()) {
      ++result.summary.rejected_empty_skills;
      continue;
    }

    auto [it, inserted] = index_of.try_emplace(title, result.records.size());
    if (inserted) {
      result.records.push_back(TitleRecord{std::move(title), std::move(skills), std::move(lang)});
    } else {
      merge_skills(result.records[it->second].skills, skills);
      ++result.summary.merged;
    }
  }
  return result;
}

ParsedCorpus parse_corpus(std::istream& in, std::string_view source) {
  return parse_corpus(read_lines(in), source);
}

std::vector<TitleRecord> read_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_lines(path), path.string()).records;
}

std::string serialize_corpus(const std::vector<TitleRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    Json obj;
    obj["title"] = r.title;
    obj["skills"] = r.skills;
    if (r.lang) obj["lang"] = *r.lang;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void write_corpus(const std::filesystem::path& path, const std::vector<TitleRecord>& records) {
  write_text_file(path, serialize_corpus(records));
}

// ---------------------------------------------------------------------------

Xorshift64Star::Xorshift64Star(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  state_ = z != 0 ? z : 0x9E3779B97F4A7C15ULL;
}

std::uint64_t Xorshift64Star::next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

std::uint64_t Xorshift64Star::below(std::uint64_t bound) { return next() % bound; }

double Xorshift64Star::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

SplitSizes split_sizes(std::size_t n) {
  SplitSizes s;
  s.train = n * 7 / 10;
  s.dev = n / 10;
  s.test = n - s.train - s.dev;
  return s;
}

DatasetSplit split_dataset(const std::vector<TitleRecord>& records, std::uint64_t seed) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot split an empty corpus");
  }
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Xorshift64Star rng(seed);
  shuffle_in_place(order, rng);

  const SplitSizes sizes = split_sizes(records.size());
  DatasetSplit split;
  split.seed = seed;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const TitleRecord& r = records[order[i]];
    if (i < sizes.train) {
      split.train.push_back(r);
    } else if (i < sizes.train + sizes.dev) {
      split.dev.push_back(r);
    } else {
      split.test.push_back(r);
    }
  }
  return split;
}

// ---------------------------------------------------------------------------

namespace {

constexpr const char* kConsonants[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u"};
constexpr const char* kModifiers[] = {"senior", "junior", "lead",  "chief", "staff",
                                      "head",   "intern", "trainee", "principal", "associate"};
constexpr const char* kGenericNames[] = {"communication skills", "excel", "sales", "marketing",
                                         "customer service", "finance", "retail", "teamwork"};

std::string pseudo_word(Xorshift64Star& rng, std::size_t syllables) {
  std::string w;
  for (std::size_t i = 0; i < syllables; ++i) {
    w += kConsonants[rng.below(std::size(kConsonants))];
    w += kVowels[rng.below(std::size(kVowels))];
  }
  return w;
}

std::vector<std::string> sample_without_replacement(const std::vector<std::string>& pool, std::size_t count,
                                                    Xorshift64Star& rng) {
  std::vector<std::string> copy = pool;
  shuffle_in_place(copy, rng);
  copy.resize(std::min(count, copy.size()));
  return copy;
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& config) {
  if (config.families == 0 || config.synonyms_per_family == 0 || config.skills == 0) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic corpus counts must be >= 1");
  }
  Xorshift64Star rng(config.seed);
  SyntheticCorpus out;

  const std::size_t n_generic = std::min(config.generic_skills, config.skills / 2);
  std::vector<std::string> pool;
  for (std::size_t i = 0; i < n_generic; ++i) {
    out.generic_skills.push_back(i < std::size(kGenericNames) ? std::string(kGenericNames[i])
                                                               : "generic " + std::to_string(i));
  }
  for (std::size_t i = 0; i < config.skills - n_generic; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "skill %03zu", i);
    pool.emplace_back(buf);
  }

  std::unordered_set<std::string> used_stems;
  for (std::size_t f = 0; f < config.families; ++f) {
    std::string stem;
    do {
      stem = pseudo_word(rng, 5) + " " + pseudo_word(rng, 5);
    } while (!used_stems.insert(stem).second);

    std::vector<std::string> core = sample_without_replacement(pool, config.core_skills_per_family, rng);
    std::sort(core.begin(), core.end());
    out.family_core.push_back(core);

    for (std::size_t k = 0; k < config.synonyms_per_family; ++k) {
      std::string title;
      if (k < std::size(kModifiers)) {
        title = std::string(kModifiers[k]) + " " + stem;
      } else {
        title = std::string(kModifiers[k % std::size(kModifiers)]) + " " + stem + " " +
                std::to_string(k / std::size(kModifiers) + 1);
      }

      std::vector<std::string> skills = out.generic_skills;
      skills.insert(skills.end(), core.begin(), core.end());
      for (const auto& s : sample_without_replacement(pool, config.noise_skills_per_title, rng)) {
        skills.push_back(s);
      }
      sort_unique(skills);
      out.records.push_back(TitleRecord{std::move(title), std::move(skills), std::nullopt});
    }
  }
  return out;
}

}  // namespace skillrank
