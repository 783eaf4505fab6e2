#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "skillrank/embedding.hpp"
#include "skillrank/error.hpp"

using namespace skillrank;

namespace {

ErrorCode load_error(const std::string& text) {
  std::istringstream in(text);
  try {
    load_embedding_store(in);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected load failure");
  return ErrorCode::kIo;
}

std::vector<double> random_vector(Xorshift64Star& rng, std::size_t d) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.uniform() * 2.0 - 1.0;
  return v;
}

}  // namespace

TEST_CASE("cosine_similarity basics") {
  const std::vector<double> v{0.3, -0.4, 0.5};
  CHECK(cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{-1, 0}) == -1.0);
  CHECK_THROWS_AS(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{1, 0, 0}), Error);
}

TEST_CASE("cosine is symmetric, bounded, and equals dot for unit vectors") {
  Xorshift64Star rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + rng.below(12);
    auto a = random_vector(rng, d);
    auto b = random_vector(rng, d);
    const double ab = cosine_similarity(a, b);
    CHECK(ab == cosine_similarity(b, a));
    CHECK(std::abs(ab) <= 1.0 + 1e-9);

    EmbeddingStore store(d, "test");
    store.add("a", a);
    store.add("b", b);
    CHECK(std::abs(dot(store.at("a"), store.at("b")) - ab) < 1e-9);
  }
}

TEST_CASE("fallback_embed is deterministic and unit norm") {
  const auto a = fallback_embed("python developer");
  const auto b = fallback_embed("python developer");
  CHECK(a == b);
  CHECK(cosine_similarity(a, b) == doctest::Approx(1.0));
  for (const char* t : {"a", "c++ developer", "stock broker nyc", "therapist", "Ärzt"}) {
    for (std::size_t d : {16u, 64u, 256u}) {
      const auto v = fallback_embed(t, d);
      CHECK(v.size() == d);
      CHECK(std::abs(l2_norm(v) - 1.0) < 1e-6);
    }
  }
  CHECK_THROWS_AS(fallback_embed("", 256), Error);
  CHECK_THROWS_AS(fallback_embed("x", 8), Error);
}

TEST_CASE("fallback_embed similarity ordering agrees with the unhashed trigram oracle") {
  const double ref_close = oracle::trigram_cosine("python developer", "python programmer");
  const double ref_far = oracle::trigram_cosine("python developer", "therapist");
  REQUIRE(ref_close > ref_far);
  const auto dev = fallback_embed("python developer");
  CHECK(cosine_similarity(dev, fallback_embed("python programmer")) >
        cosine_similarity(dev, fallback_embed("therapist")));
}

TEST_CASE("fallback_embed matches hand-computed hashing for a short title") {
  // "ab" pads to "^ab$": trigrams "^ab" and "ab$".
  auto fnv = [](const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  };
  std::vector<double> expected(32, 0.0);
  for (const std::string g : {"^ab", "ab$"}) {
    const auto h = fnv(g);
    expected[h % 32] += (h >> 63) ? -1.0 : 1.0;
  }
  double n = 0;
  for (double x : expected) n += x * x;
  for (double& x : expected) x /= std::sqrt(n);
  CHECK(fallback_embed("ab", 32) == expected);
}

TEST_CASE("load_embedding_store accepts a minimal valid file") {
  std::istringstream in(R"({"type":"header","dimension":4,"provider":"p","count":1})"
                        "\n"
                        R"({"type":"vec","id":"a","v":[0.5,0.5,0.5,0.5]})"
                        "\n");
  const auto store = load_embedding_store(in);
  CHECK(store.size() == 1);
  CHECK(store.dimension() == 4);
  CHECK(store.provider() == "p");
}

TEST_CASE("load_embedding_store renormalizes slightly off vectors") {
  std::istringstream in(R"({"type":"header","dimension":2,"provider":"p"})"
                        "\n"
                        R"({"type":"vec","id":"a","v":[0.6002,0.8]})"
                        "\n");
  const auto store = load_embedding_store(in);
  CHECK(std::abs(l2_norm(store.at("a")) - 1.0) < 1e-12);
}

TEST_CASE("load_embedding_store contract errors") {
  const std::string header = R"({"type":"header","dimension":4,"provider":"p"})";
  CHECK(load_error(R"({"type":"vec","id":"a","v":[1,0,0,0]})") == ErrorCode::kMissingHeader);
  CHECK(load_error("") == ErrorCode::kMissingHeader);
  CHECK(load_error(header + "\n" + R"({"type":"vec","id":"a","v":[1,0,0]})") == ErrorCode::kDimensionMismatch);
  CHECK(load_error(header + "\n" + R"({"type":"vec","id":"a","v":[1,0,0,0]})" + "\n" +
                   R"({"type":"vec","id":"a","v":[0,1,0,0]})") == ErrorCode::kDuplicateId);
  CHECK(load_error(header + "\n" + R"({"type":"vec","id":"a","v":[0,0,0,0]})") == ErrorCode::kZeroVector);
  CHECK(load_error(header + "\n" + R"({"type":"vec","id":"a","v":[2,0,0,0]})") == ErrorCode::kParse);
  CHECK(load_error(R"({"type":"header","dimension":4,"count":2})" "\n" R"({"type":"vec","id":"a","v":[1,0,0,0]})") ==
        ErrorCode::kParse);

  std::istringstream in(header + "\n" + R"({"type":"vec","id":"bad id","v":[1,0]})");
  try {
    load_embedding_store(in);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bad id") != std::string::npos);
  }
}

TEST_CASE("embedding store survives a text round trip bit for bit") {
  const auto store = embed_titles({"python developer", "therapist", "c# engineer"}, 64);
  std::istringstream in(serialize_embedding_store(store));
  const auto back = load_embedding_store(in);
  REQUIRE(back.size() == store.size());
  CHECK(back.provider() == store.provider());
  for (const auto& id : store.ids()) {
    const auto a = store.at(id);
    const auto b = back.at(id);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST_CASE("find_similar neighborhoods") {
  EmbeddingStore store(3, "t");
  store.add("x", std::vector<double>{1, 0, 0});
  store.add("x2", std::vector<double>{1, 0, 0});
  store.add("y", std::vector<double>{0, 1, 0});
  store.add("z", std::vector<double>{0, 0, 1});

  CHECK(find_similar("x", store, {"x"}) == std::vector<std::string>{"x"});
  CHECK(find_similar("x", store, {"x", "x2", "y"}) == std::vector<std::string>{"x", "x2"});
  CHECK(find_similar("x2", store, {"x", "x2", "y"}) == std::vector<std::string>{"x", "x2"});
  for (const char* a : {"y", "z"}) {
    CHECK(find_similar(a, store, {"x", "y", "z"}) == std::vector<std::string>{a});
  }
  // Self is kept even at threshold 1 where rounding could drop it.
  CHECK(find_similar("x", store, {"x"}, {1.0}) == std::vector<std::string>{"x"});
  CHECK_THROWS_AS(find_similar("missing", store, {"x"}), Error);
  CHECK_THROWS_AS(find_similar("x", store, {"missing"}), Error);
  CHECK_THROWS_AS(find_similar("x", store, {"x"}, {0.0}), Error);
}

TEST_CASE("find_similar shrinks as the threshold rises") {
  std::vector<std::string> titles;
  for (const char* a : {"python", "java", "sales", "data"}) {
    for (const char* b : {"developer", "engineer", "programmer", "manager"}) {
      titles.push_back(std::string(a) + " " + b);
    }
  }
  const auto store = embed_titles(titles, 128);
  for (const auto& anchor : titles) {
    std::size_t prev = titles.size() + 1;
    for (double t = 0.05; t <= 1.0; t += 0.05) {
      const auto hood = find_similar(anchor, store, titles, {t});
      CHECK(hood.size() <= prev);
      prev = hood.size();
    }
  }
}
