#include "skillrank/embedding.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "skillrank/error.hpp"
#include "skillrank/io.hpp"

namespace skillrank {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = kFnvOffset;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::size_t dimension, std::string provider)
    : dimension_(dimension), provider_(std::move(provider)) {
  if (dimension_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
  }
}

void EmbeddingStore::add(std::string id, std::span<const double> values) {
  if (values.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch, "vector for \"" + id + "\" has length " +
                                                   std::to_string(values.size()) + ", expected " +
                                                   std::to_string(dimension_));
  }
  if (index_.contains(id)) {
    throw Error(ErrorCode::kDuplicateId, "duplicate title id \"" + id + "\"");
  }
  const double norm = l2_norm(values);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kZeroVector, "vector for \"" + id + "\" is zero or non-finite");
  }
  for (double v : values) data_.push_back(v / norm);
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
}

bool EmbeddingStore::contains(std::string_view id) const { return index_.contains(std::string(id)); }

std::span<const double> EmbeddingStore::at(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw Error(ErrorCode::kMissingId, "no embedding for \"" + std::string(id) + "\"");
  }
  return row(it->second);
}

std::span<const double> EmbeddingStore::row(std::size_t index) const {
  return std::span<const double>(data_).subspan(index * dimension_, dimension_);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "cosine of vectors with lengths " + std::to_string(a.size()) +
                                                   " and " + std::to_string(b.size()));
  }
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  }
  return dot(a, b) / (na * nb);
}

EmbeddingVector fallback_embed(std::string_view title, std::size_t dimension) {
  if (title.empty()) {
    throw Error(ErrorCode::kEmptyTitle, "cannot embed an empty title");
  }
  if (dimension < kMinFallbackDimension) {
    throw Error(ErrorCode::kInvalidArgument,
                "fallback dimension must be >= " + std::to_string(kMinFallbackDimension));
  }
  std::string padded;
  padded.reserve(title.size() + 2);
  padded += '^';
  padded += title;
  padded += '$';

  EmbeddingVector v(dimension, 0.0);
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    const std::uint64_t h = fnv1a64(std::string_view(padded).substr(i, 3));
    const double sign = (h >> 63) != 0 ? -1.0 : 1.0;
    v[h % dimension] += sign;
  }
  const double norm = l2_norm(v);
  if (norm == 0.0) {
    // Every trigram cancelled out; fall back to the first bucket so the
    // vector stays well defined.
    v[0] = 1.0;
    return v;
  }
  for (double& x : v) x /= norm;
  return v;
}

std::string fallback_provider_label(std::size_t dimension) {
  return "fallback-trigram-fnv1a-" + std::to_string(dimension);
}

EmbeddingStore embed_titles(const std::vector<std::string>& titles, std::size_t dimension) {
  EmbeddingStore store(dimension, fallback_provider_label(dimension));
  for (const auto& t : titles) {
    if (store.contains(t)) continue;
    store.add(t, fallback_embed(t, dimension));
  }
  return store;
}

EmbeddingStore load_embedding_store(std::istream& in, std::string_view source) {
  const auto lines = read_lines(in);
  std::size_t i = 0;
  while (i < lines.size() && is_blank(lines[i])) ++i;
  auto where = [&](std::size_t line_no) {
    std::ostringstream s;
    s << source << ":" << line_no << ": ";
    return s.str();
  };
  if (i == lines.size()) {
    throw Error(ErrorCode::kMissingHeader, std::string(source) + ": embedding file has no header");
  }
  const Json header = parse_json_line(lines[i], source, i + 1);
  if (!header.is_object() || header.value("type", "") != "header" || !header.contains("dimension") ||
      !header["dimension"].is_number_unsigned()) {
    throw Error(ErrorCode::kMissingHeader, where(i + 1) + "first record must be a header with a dimension");
  }
  const auto dimension = header["dimension"].get<std::size_t>();
  if (dimension == 0) {
    throw Error(ErrorCode::kMissingHeader, where(i + 1) + "header dimension must be positive");
  }
  EmbeddingStore store(dimension, header.value("provider", ""));

  std::vector<double> values;
  for (++i; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const Json rec = parse_json_line(lines[i], source, i + 1);
    if (!rec.is_object() || rec.value("type", "") != "vec" || !rec.contains("id") || !rec["id"].is_string() ||
        !rec.contains("v") || !rec["v"].is_array()) {
      throw Error(ErrorCode::kParse, where(i + 1) + "expected {\"type\":\"vec\",\"id\":...,\"v\":[...]}");
    }
    const auto id = rec["id"].get<std::string>();
    values.clear();
    for (const auto& x : rec["v"]) {
      if (!x.is_number()) throw Error(ErrorCode::kParse, where(i + 1) + "non-numeric component for \"" + id + "\"");
      values.push_back(x.get<double>());
    }
    if (values.size() != dimension) {
      throw Error(ErrorCode::kDimensionMismatch, where(i + 1) + "vector for \"" + id + "\" has length " +
                                                     std::to_string(values.size()) + ", header dimension is " +
                                                     std::to_string(dimension));
    }
    const double norm = l2_norm(values);
    if (norm == 0.0) {
      throw Error(ErrorCode::kZeroVector, where(i + 1) + "zero vector for \"" + id + "\"");
    }
    if (std::abs(norm - 1.0) > kLoadNormTolerance) {
      throw Error(ErrorCode::kParse, where(i + 1) + "vector for \"" + id + "\" is not unit norm (|v| = " +
                                         format_real(norm) + ")");
    }
    try {
      store.add(id, values);
    } catch (const Error& e) {
      throw Error(e.code(), where(i + 1) + e.what());
    }
  }
  if (header.contains("count") && header["count"].is_number_unsigned() &&
      header["count"].get<std::size_t>() != store.size()) {
    throw Error(ErrorCode::kParse, std::string(source) + ": header count " +
                                       std::to_string(header["count"].get<std::size_t>()) + " but " +
                                       std::to_string(store.size()) + " vectors");
  }
  return store;
}

EmbeddingStore load_embedding_store(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return load_embedding_store(in, path.string());
}

std::string serialize_embedding_store(const EmbeddingStore& store) {
  std::string out;
  Json header;
  header["type"] = "header";
  header["dimension"] = store.dimension();
  header["provider"] = store.provider();
  header["count"] = store.size();
  out += header.dump();
  out += '\n';
  for (std::size_t i = 0; i < store.size(); ++i) {
    // Components go through format_real so the text is the shortest
    // round-trip form independent of the JSON library's float printer.
    out += R"({"type":"vec","id":)";
    out += Json(store.ids()[i]).dump();
    out += R"(,"v":[)";
    const auto row = store.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_real(row[j]);
    }
    out += "]}\n";
  }
  return out;
}

void save_embedding_store(const std::filesystem::path& path, const EmbeddingStore& store) {
  write_text_file(path, serialize_embedding_store(store));
}

std::vector<std::string> find_similar(std::string_view anchor, const EmbeddingStore& store,
                                      const std::vector<std::string>& candidates,
                                      const NeighborhoodConfig& config) {
  if (!(config.threshold > 0.0 && config.threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1]");
  }
  const auto a = store.at(anchor);
  std::vector<std::string> out;
  for (const auto& c : candidates) {
    const auto v = store.at(c);
    if (c == anchor || dot(a, v) >= config.threshold) out.push_back(c);
  }
  return out;
}

}  // namespace skillrank
