#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "ffc/errors.hpp"
#include "ffc/stallings.hpp"
#include "ffc/whitehead.hpp"
#include "oracles.hpp"

using namespace ffc;

namespace {
Word W(const char* s) { return parse_word(s); }
Word W(const std::string& s) { return parse_word(s); }
std::string S(const Word& w) { return to_string(w); }

std::multiset<std::pair<std::string, std::string>> edge_names(const WhiteheadGraph& g,
                                                              const Alphabet& al) {
  std::multiset<std::pair<std::string, std::string>> out;
  for (auto [u, v] : g.edges) {
    std::string x = S(al.expand(letter_word(WhiteheadAutomorphism::letter_of_bit(u))));
    std::string y = S(al.expand(letter_word(WhiteheadAutomorphism::letter_of_bit(v))));
    if (y < x) std::swap(x, y);
    out.emplace(x, y);
  }
  return out;
}
}  // namespace

TEST_CASE("apply: permutations and multipliers") {
  const auto swap = WhiteheadAutomorphism::permutation(2, {2, 1});
  CHECK(S(swap.apply(W("ab"))) == "ba");
  const auto t2 = WhiteheadAutomorphism::multiplier(2, 1, {1, 2});
  CHECK(S(t2.apply(W("b"))) == "ba");
  CHECK(t2.apply(Word{}).empty());
  CHECK(swap.apply(Word{}).empty());
}

TEST_CASE("multiplier data must exclude the inverse of the multiplier") {
  CHECK_THROWS_AS(WhiteheadAutomorphism::multiplier(2, 1, {1, -1}), InputError);
}

TEST_CASE("property: every type-II automorphism matches the string oracle and inverts") {
  std::mt19937_64 rng(11);
  const int rank = 3;
  for_each_multiplier_automorphism(rank, [&](const WhiteheadAutomorphism& phi) {
    std::set<char> z;
    for (Letter x : phi.subset()) z.insert(to_string(x)[0]);
    const char mult = to_string(phi.multiplier_letter())[0];
    for (int t = 0; t < 5; ++t) {
      const std::string raw = oracle::random_word(rng, rank, static_cast<int>(rng() % 7));
      const Word w = W(raw);
      CHECK(S(phi.apply(w)) == oracle::reduce(oracle::whitehead2(raw, mult, z)));
      CHECK(phi.inverse().apply(phi.apply(w)) == w);
    }
    return false;
  });
}

TEST_CASE("property: automorphisms carry the standard basis to a basis") {
  for_each_multiplier_automorphism(3, [&](const WhiteheadAutomorphism& phi) {
    std::vector<Word> images;
    for (int i = 1; i <= 3; ++i) images.push_back(phi.image(i));
    CHECK(spans_as_basis(images, 3));
    return false;
  });
}

TEST_CASE("minimize examples") {
  // Inputs are cyclically reduced first, which already strips the conjugator.
  auto m = minimize(cyclic_reduce(W("bcB")).core, 3);
  CHECK(to_string(m.minimal) == "c");
  m = minimize(CyclicWord(W("bcBa")), 3);
  CHECK(m.minimal.size() == 1);
  CHECK(m.transcript.size() >= 1);

  m = minimize(CyclicWord(W("b")), 3);
  CHECK(to_string(m.minimal) == "b");
  CHECK(m.transcript.empty());

  // Rank 3 alphabet b, c, d.
  const Alphabet al = Alphabet::fitting(3, W("bbccdd"));
  m = minimize(CyclicWord(al.compress(W("bbccdd"))), 3);
  CHECK(m.minimal.size() == 6);
  CHECK(m.transcript.empty());
}

TEST_CASE("property: minimization never lengthens and reaches a local minimum") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const std::string raw = oracle::cyclic_reduce(oracle::random_word(rng, 3, 2 + static_cast<int>(rng() % 8)));
    if (raw.empty()) continue;
    const CyclicWord w(W(raw));
    const auto m = minimize(w, 3);
    Word cur = w.representative();
    for (const auto& phi : m.transcript) {
      const Word next = cyclic_reduce(phi.apply(cur)).core.representative();
      CHECK(next.size() < cur.size());
      cur = next;
    }
    CHECK(CyclicWord(cur) == m.minimal);
    for_each_multiplier_automorphism(3, [&](const WhiteheadAutomorphism& phi) {
      CHECK(cyclic_reduce(phi.apply(m.minimal.representative())).core.size() >= m.minimal.size());
      return false;
    });
  }
}

TEST_CASE("is_primitive examples") {
  CHECK(is_primitive(W("b"), 3));
  CHECK_FALSE(is_primitive(W("bb"), 3));
  CHECK(is_primitive(W("bcB"), 3));
  CHECK(oracle::primitive_by_orbit("bcB", 3, 3));
  CHECK_THROWS_AS(is_primitive(Word{}, 3), InputError);
}

TEST_CASE("property: is_primitive agrees with the orbit oracle on all short words") {
  for (int rank = 2; rank <= 3; ++rank) {
    const auto primitive = oracle::primitive_classes(rank, 4);
    for (int len = 1; len <= 4; ++len) {
      for (const auto& raw : oracle::reduced_words(rank, len)) {
        const std::string c = oracle::cyclic_reduce(raw);
        const bool expected = !c.empty() && primitive.count(oracle::min_rotation(c)) > 0;
        if (c.empty()) continue;
        CAPTURE(raw);
        CHECK(is_primitive(W(raw), rank) == expected);
      }
    }
  }
}

TEST_CASE("whitehead_graph examples") {
  const Alphabet bcd = Alphabet::fitting(3, W("bbccdd"));
  auto g = whitehead_graph(CyclicWord(bcd.compress(W("bbccdd"))), 3);
  CHECK(g.edges.size() == 6);
  CHECK(edge_names(g, bcd) == std::multiset<std::pair<std::string, std::string>>{
                                  {"B", "b"}, {"B", "c"}, {"C", "c"}, {"C", "d"}, {"D", "d"}, {"D", "b"}});

  const Alphabet std2 = Alphabet::standard(2);
  g = whitehead_graph(CyclicWord(W("bc")), 3);
  CHECK(edge_names(g, Alphabet::standard(3)) ==
        std::multiset<std::pair<std::string, std::string>>{{"B", "c"}, {"C", "b"}});
  g = whitehead_graph(CyclicWord(W("b")), 2);
  CHECK(edge_names(g, std2) == std::multiset<std::pair<std::string, std::string>>{{"B", "b"}});
}

TEST_CASE("property: Whitehead graph has one edge per cyclic letter") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const std::string raw = oracle::cyclic_reduce(oracle::random_word(rng, 4, 1 + static_cast<int>(rng() % 10)));
    if (raw.empty()) continue;
    CHECK(whitehead_graph(CyclicWord(W(raw)), 4).edges.size() == raw.size());
  }
}

TEST_CASE("is_filling examples") {
  CHECK(is_filling(W("bbccdd"), 3));
  CHECK(is_filling(W("ccbbddcc"), 3));
  CHECK_FALSE(is_filling(W("b"), 3));
  CHECK(is_filling(W("bcBC"), 2));
  CHECK_FALSE(is_filling(W("bc"), 2));
}

TEST_CASE("property: is_filling agrees with the minimal-orbit oracle") {
  for (int rank = 2; rank <= 3; ++rank) {
    const int max_len = rank == 2 ? 6 : 5;
    for (int len = 1; len <= max_len; ++len) {
      for (const auto& raw : oracle::reduced_words(rank, len)) {
        if (oracle::cyclic_reduce(raw) != raw) continue;
        CAPTURE(raw);
        CHECK(is_filling(W(raw), rank) == oracle::filling_by_orbit(raw, rank));
      }
    }
  }
}

TEST_CASE("property: filling is conjugation and inversion invariant and excludes primitive") {
  std::mt19937_64 rng(14);
  int filling_seen = 0;
  for (int t = 0; t < 300; ++t) {
    const Word w = W(oracle::random_word(rng, 3, 2 + static_cast<int>(rng() % 8)));
    const Word g = W(oracle::random_word(rng, 3, static_cast<int>(rng() % 4)));
    if (w.empty()) continue;
    const bool f = is_filling(w, 3);
    filling_seen += f ? 1 : 0;
    CHECK(is_filling(conjugate(w, g), 3) == f);
    CHECK(is_filling(w.inverse(), 3) == f);
    if (f) CHECK_FALSE(is_primitive(w, 3));
  }
  CHECK(filling_seen > 0);
}
