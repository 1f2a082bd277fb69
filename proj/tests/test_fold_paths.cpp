#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "ffc/errors.hpp"
#include "ffc/fold_paths.hpp"
#include "ffc/sampling.hpp"
#include "oracles.hpp"

using namespace ffc;

namespace {
Word W(const std::string& s) { return parse_word(s); }
std::vector<Word> Ws(std::initializer_list<const char*> xs) {
  std::vector<Word> out;
  for (const char* x : xs) out.push_back(W(x));
  return out;
}
FactorVertex V(std::initializer_list<const char*> gens, int rank = 4) {
  return FactorVertex::certify(Ws(gens), rank);
}
const Word kW = parse_word("bbccdd");

bool contains_a(const FactorVertex& v, const FactorVertex& a) { return conjugate_into(a, v); }

void check_path(const std::vector<FactorVertex>& path, const FactorVertex& a) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    CHECK(contains_a(path[i], a));
    if (i + 1 < path.size()) CHECK(adjacent(path[i], path[i + 1]));
  }
}

bool pi_overlap(const std::vector<PiElement>& x, const std::vector<PiElement>& y) {
  for (const auto& p : x)
    for (const auto& q : y)
      if (same_vertex(p.vertex, q.vertex)) return true;
  return false;
}

std::vector<Word> random_target(std::mt19937_64& rng, int rank) {
  const auto t = random_automorphism_fixing_a(rank, 6, rng);
  std::vector<Word> out;
  for (int i = 1; i <= rank; ++i) out.push_back(apply_all(t, letter_word(i)));
  return out;
}
}  // namespace

TEST_CASE("marked graphs validate their markings") {
  CHECK_NOTHROW(MarkedGraph::rose(Ws({"a", "b", "c"}), 1));
  CHECK_THROWS_AS(MarkedGraph::rose(Ws({"a", "bb", "c"}), 1), InputError);
  CHECK_THROWS_AS(MarkedGraph(2, {{0, 0, W("a")}}, 0, {}), InputError);
  CHECK_THROWS_AS(MarkedGraph(2, {{0, 0, W("a")}, {0, 1, W("b")}, {0, 1, W("c")}, {0, 1, W("d")}}, 0, {0}),
                  InputError);
  const MarkedGraph theta(2, {{0, 0, W("a")}, {0, 1, W("b")}, {0, 1, W("c")}, {0, 1, W("Cb")}}, 0, {0});
  CHECK(theta.rank() == 3);
  CHECK(theta.loop_basis().size() == 3);
  CHECK(spans_as_basis(theta.loop_basis(), 3));
  CHECK(theta.loop_basis()[0] == W("a"));
}

TEST_CASE("normalize prunes hair and smooths bivalent vertices") {
  // A rose with a petal subdivided and a hanging edge.
  const MarkedGraph g(3, {{0, 0, W("a")}, {0, 1, W("b")}, {1, 0, W("a")}, {1, 2, W("a")}}, 0, {0});
  const MarkedGraph n = normalize(g);
  CHECK(n.vertex_count() == 1);
  CHECK(n.edges().size() == 2);
  CHECK(n.rank() == 2);
}

TEST_CASE("pi_of examples") {
  CHECK(pi_of(MarkedGraph::rose(Ws({"a", "b", "c", "d"}), 1)).size() == 6);
  const auto pi3 = pi_of(MarkedGraph::rose(Ws({"a", "b", "c"}), 1));
  REQUIRE(pi3.size() == 2);
  CHECK(same_vertex(pi3[0].vertex, V({"a", "b"}, 3)));
  CHECK(same_vertex(pi3[1].vertex, V({"a", "c"}, 3)));

  // Petal a on the base vertex plus a theta graph with edges marked b, c,
  // Cb: the rank-two subgraphs are the petal with any two theta edges.
  const MarkedGraph theta(2, {{0, 0, W("a")}, {0, 1, W("b")}, {0, 1, W("c")}, {0, 1, W("Cb")}}, 0, {0});
  const auto pt = pi_of(theta);
  CHECK(pt.size() == 3);
  std::vector<FactorVertex> expected{V({"a", "bC"}, 3), V({"a", "c"}, 3), V({"a", "cBc"}, 3)};
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& p : pt) found = found || same_vertex(p.vertex, e);
    CHECK(found);
  }
}

TEST_CASE("pi_diameter_path examples") {
  const auto rose = MarkedGraph::rose(Ws({"a", "b", "c", "d"}), 1);
  const auto a = V({"a"});
  auto path = pi_diameter_path(rose, V({"a", "b"}), V({"a", "c"}));
  CHECK(path.size() <= 5);
  check_path(path, a);
  CHECK(same_vertex(path.front(), V({"a", "b"})));
  CHECK(same_vertex(path.back(), V({"a", "c"})));

  path = pi_diameter_path(rose, V({"a", "b"}), V({"a", "b"}));
  CHECK(path.size() == 1);

  path = pi_diameter_path(rose, V({"a", "b"}), V({"a", "b", "c"}));
  check_path(path, a);
  CHECK(path.size() <= 5);

  CHECK_THROWS_AS(pi_diameter_path(MarkedGraph::rose(Ws({"a", "b", "c"}), 1), V({"a", "b"}, 3), V({"a", "c"}, 3)),
                  MathError);
}

TEST_CASE("property: every pair in pi of the standard rose is joined within distance four") {
  const auto rose = MarkedGraph::rose(Ws({"a", "b", "c", "d"}), 1);
  const auto a = V({"a"});
  const auto pi = pi_of(rose);
  for (const auto& p : pi)
    for (const auto& q : pi) {
      const auto path = pi_diameter_path(rose, p.vertex, q.vertex);
      CHECK(path.size() <= 5);
      CHECK(same_vertex(path.front(), p.vertex));
      CHECK(same_vertex(path.back(), q.vertex));
      check_path(path, a);
    }
}

TEST_CASE("fold_sequence examples") {
  const auto rose = MarkedGraph::rose(Ws({"a", "b", "c", "d"}), 1);
  const auto seq = fold_sequence(rose, Ws({"a", "cdbDC", "c", "d"}));
  CHECK_FALSE(seq.stages.empty());
  CHECK(seq.finish.loop_basis() == Ws({"a", "cdbDC", "c", "d"}));

  const auto id = fold_sequence(rose, Ws({"a", "b", "c", "d"}));
  CHECK(id.stages.empty());
  CHECK_THROWS_AS(fold_sequence(rose, Ws({"a", "b", "c"})), InputError);
  CHECK_THROWS_AS(fold_sequence(rose, Ws({"a", "bb", "c", "d"})), MathError);
}

TEST_CASE("property: fold stages are elementary folds between valid marked graphs") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 40; ++t) {
    const auto target = random_target(rng, 4);
    const auto seq = fold_sequence(MarkedGraph::rose(Ws({"a", "b", "c", "d"}), 1), target);
    for (const auto& st : seq.stages) {
      CHECK(st.subdivided.vertex_count() == 2);
      CHECK(st.folded.is_rose());
      CHECK(st.folded.edges().size() + 1 == st.subdivided.edges().size());
      const auto& e1 = st.subdivided.edges()[static_cast<std::size_t>(st.fold.first.edge)];
      const auto& e2 = st.subdivided.edges()[static_cast<std::size_t>(st.fold.second.edge)];
      const int v1 = st.fold.first.start ? e1.from : e1.to;
      const int v2 = st.fold.second.start ? e2.from : e2.to;
      CHECK(v1 == st.fold.vertex);
      CHECK(v2 == st.fold.vertex);
      CHECK_FALSE(st.fold.first == st.fold.second);
    }
    CHECK(seq.finish.loop_basis() == target);
  }
}

TEST_CASE("property: folds away from H keep a common element of pi") {
  std::mt19937_64 rng(52);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    const auto seq = fold_sequence(MarkedGraph::rose(Ws({"a", "b", "c", "d"}), 1), random_target(rng, 4));
    for (const auto& st : seq.stages) {
      if (st.touches_h) continue;
      ++checked;
      CHECK(pi_overlap(pi_of(st.subdivided), pi_of(st.folded)));
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("upward_path examples") {
  const auto a = V({"a"});
  auto path = upward_path(V({"a", "b"}), V({"a", "c"}), a);
  CHECK(path.size() <= 5);
  check_path(path, a);

  path = upward_path(V({"a", "b"}), V({"a", "b"}), a);
  CHECK(path.size() == 1);

  std::vector<Word> ext{W("a")};
  for (const char* x : {"b", "c", "d"}) ext.push_back(conjugate(W(x), kW));
  const auto y = FactorVertex::with_extension({W("a"), conjugate(W("b"), kW)}, ext);
  path = upward_path(V({"a", "b"}), y, a);
  CHECK(same_vertex(path.front(), V({"a", "b"})));
  CHECK(same_vertex(path.back(), y));
  check_path(path, a);
}

TEST_CASE("property: upward paths between random link vertices") {
  const auto ctx = TwistContext::standard(4, kW, W("b"));
  const auto a = V({"a"});
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto p = sample_link_pair(ctx, 5, i);
    const auto q = sample_link_pair(ctx, 6, i);
    const auto path = upward_path(p.x, q.y, a);
    CHECK(same_vertex(path.front(), p.x));
    CHECK(same_vertex(path.back(), q.y));
    check_path(path, a);
  }
}

TEST_CASE("w-core diagnostic basics") {
  const auto rose = MarkedGraph::rose(Ws({"a", "b", "c", "d"}), 1);
  auto states = w_core_diagnostic(fold_sequence(rose, Ws({"a", "b", "c", "d"})), kW);
  REQUIRE(states.size() == 1);
  CHECK_FALSE(states[0].has_illegal_turn);
  CHECK(states[0].core_length == 6);
  CHECK(illegal_turns_form_prefix(states));

  std::vector<Word> target;
  for (const char* x : {"a", "b", "c", "d"}) target.push_back(conjugate(W(x), kW));
  target[0] = W("a");
  const auto seq = fold_sequence(rose, target);
  for (GateRule rule : {GateRule::NextFold, GateRule::Residual}) {
    states = w_core_diagnostic(seq, kW, rule);
    CHECK(states.size() == seq.stages.size() + 1);
    CHECK_FALSE(states.back().has_illegal_turn);
    for (const auto& s : states) {
      CHECK(s.core_length >= 6);
      CHECK(s.max_legal_run <= s.core_length);
      CHECK(s.phase >= 1);
      CHECK(s.phase <= 3);
      CHECK((s.phase == 1) == s.has_illegal_turn);
    }
  }
  CHECK_THROWS_AS(TwistContext::standard(4, W("bc"), W("b")), InputError);
  CHECK_THROWS_AS(w_core_diagnostic(seq, W("bcbc"), GateRule::NextFold), InputError);
}

TEST_CASE("prefix test on hand-made state lists") {
  auto mk = [](std::vector<bool> flags) {
    std::vector<WCoreState> out;
    for (bool f : flags) out.push_back(WCoreState{{}, f, 0, 0, 0, 0});
    return out;
  };
  CHECK(illegal_turns_form_prefix(mk({true, true, false, false})));
  CHECK(illegal_turns_form_prefix(mk({false, false})));
  CHECK_FALSE(illegal_turns_form_prefix(mk({true, false, true})));
  CHECK_FALSE(illegal_turns_form_prefix(mk({false, true})));
}

TEST_CASE("the w-core crosses every petal outside H twice in the final rose") {
  std::vector<Word> target;
  for (const char* x : {"a", "b", "c", "d"}) target.push_back(conjugate(W(x), power(kW, 2)));
  target[0] = W("a");
  const auto g = MarkedGraph::rose(target, 1);
  const auto path = cyclic_edge_path(g, kW);
  CHECK(path.size() == 6);
  std::map<int, int> crossings;
  for (const auto& t : path) ++crossings[t.edge];
  CHECK(crossings[0] == 0);
  for (int e = 1; e <= 3; ++e) CHECK(crossings[e] == 2);
}
