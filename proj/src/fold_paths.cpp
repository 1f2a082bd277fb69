#include "ffc/fold_paths.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <utility>

#include "ffc/errors.hpp"

namespace ffc {

namespace {

Word oriented(const MarkedEdge& e, int dir) { return dir > 0 ? e.label : e.label.inverse(); }
int tail(const MarkedEdge& e, int dir) { return dir > 0 ? e.from : e.to; }
int head(const MarkedEdge& e, int dir) { return dir > 0 ? e.to : e.from; }

std::vector<Word> concat(std::vector<Word> x, const std::vector<Word>& y) {
  x.insert(x.end(), y.begin(), y.end());
  return x;
}

// Breadth-first spanning tree of the subgraph on `allowed` edges, grown from
// `seeds` in order. parent[v].edge is -1 at seeds and -2 when unreached.
struct Forest {
  std::vector<Traversal> parent;
  std::vector<bool> tree_edge;
  std::vector<Word> word;  // tree path label from the seed
};

Forest grow(const std::vector<MarkedEdge>& edges, int vertex_count, const std::vector<bool>& allowed,
            Forest f, std::deque<int> queue) {
  std::vector<std::vector<std::pair<int, int>>> incident(static_cast<std::size_t>(vertex_count));
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    if (!allowed[static_cast<std::size_t>(e)]) continue;
    incident[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].from)].push_back({e, 1});
    incident[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].to)].push_back({e, -1});
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (auto [e, dir] : incident[static_cast<std::size_t>(v)]) {
      const auto& edge = edges[static_cast<std::size_t>(e)];
      const int u = head(edge, dir);
      if (f.parent[static_cast<std::size_t>(u)].edge != -2) continue;
      f.parent[static_cast<std::size_t>(u)] = {e, dir};
      f.tree_edge[static_cast<std::size_t>(e)] = true;
      f.word[static_cast<std::size_t>(u)] = f.word[static_cast<std::size_t>(v)] * oriented(edge, dir);
      queue.push_back(u);
    }
  }
  return f;
}

Forest empty_forest(std::size_t vertices, std::size_t edges) {
  return {std::vector<Traversal>(vertices, {-2, 1}), std::vector<bool>(edges, false),
          std::vector<Word>(vertices)};
}

Forest seeded(const std::vector<MarkedEdge>& edges, int vertex_count, const std::vector<bool>& allowed,
              int root) {
  Forest f = empty_forest(static_cast<std::size_t>(vertex_count), edges.size());
  f.parent[static_cast<std::size_t>(root)] = {-1, 1};
  return grow(edges, vertex_count, allowed, std::move(f), {root});
}

std::vector<bool> edge_mask(std::size_t m, const std::vector<int>& ids) {
  std::vector<bool> mask(m, false);
  for (int e : ids) mask[static_cast<std::size_t>(e)] = true;
  return mask;
}

struct SubgraphShape {
  bool connected = false;
  int rank = 0;
};

SubgraphShape shape_of(const MarkedGraph& g, const std::vector<int>& ids) {
  if (ids.empty()) return {};
  const auto mask = edge_mask(g.edges().size(), ids);
  const int root = g.edges()[static_cast<std::size_t>(ids[0])].from;
  const Forest f = seeded(g.edges(), g.vertex_count(), mask, root);
  std::set<int> vertices;
  for (int e : ids) {
    vertices.insert(g.edges()[static_cast<std::size_t>(e)].from);
    vertices.insert(g.edges()[static_cast<std::size_t>(e)].to);
  }
  for (int v : vertices)
    if (f.parent[static_cast<std::size_t>(v)].edge == -2) return {false, 0};
  return {true, static_cast<int>(ids.size()) - static_cast<int>(vertices.size()) + 1};
}

std::vector<FactorVertex> tidy_path(const std::vector<FactorVertex>& path) {
  std::vector<FactorVertex> out{path.front()};
  std::size_t i = 0;
  while (i + 1 < path.size()) {
    std::size_t j = path.size() - 1;
    while (j > i + 1 && !same_vertex(path[i], path[j]) && !adjacent(path[i], path[j])) --j;
    if (!same_vertex(path[i], path[j])) out.push_back(path[j]);
    i = j;
  }
  return out;
}

bool valid_path(const std::vector<FactorVertex>& path) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (!same_vertex(path[i], path[i + 1]) && !adjacent(path[i], path[i + 1])) return false;
  return true;
}

}  // namespace

MarkedGraph::MarkedGraph(int vertex_count, std::vector<MarkedEdge> edges, int base,
                         std::vector<int> h_edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)), base_(base), h_edges_(std::move(h_edges)) {
  if (vertex_count_ < 1) throw InputError("marked graph needs a vertex");
  if (base_ < 0 || base_ >= vertex_count_) throw InputError("base vertex out of range");
  for (const auto& e : edges_) {
    if (e.from < 0 || e.from >= vertex_count_ || e.to < 0 || e.to >= vertex_count_)
      throw InputError("edge endpoint out of range");
    if (e.label.empty()) throw InputError("edge marked by the identity");
  }
  std::set<int> h(h_edges_.begin(), h_edges_.end());
  if (h.size() != h_edges_.size()) throw InputError("repeated edge in the distinguished subgraph");
  for (int e : h_edges_)
    if (e < 0 || e >= static_cast<int>(edges_.size())) throw InputError("distinguished edge out of range");
  build_tree();
  if (rank() < 1) throw InputError("marked graph has trivial fundamental group");
  const auto loops = loop_basis();
  for (const auto& w : loops)
    if (w.max_generator() > rank()) throw InputError("marking uses letters beyond the graph rank");
  if (!spans_as_basis(loops, rank())) throw InputError("marking is not a homotopy equivalence");
  if (!h_edges_.empty() && !shape_of(*this, h_edges_).connected)
    throw InputError("distinguished subgraph is disconnected");
}

void MarkedGraph::build_tree() {
  const Forest f = seeded(edges_, vertex_count_, std::vector<bool>(edges_.size(), true), base_);
  for (const auto& p : f.parent)
    if (p.edge == -2) throw InputError("marked graph is disconnected");
  parent_ = f.parent;
  in_tree_ = f.tree_edge;
}

MarkedGraph MarkedGraph::rose(std::vector<Word> marking, int h_petals) {
  if (h_petals < 0 || h_petals > static_cast<int>(marking.size()))
    throw InputError("distinguished petal count out of range");
  std::vector<MarkedEdge> edges;
  for (auto& w : marking) edges.push_back({0, 0, std::move(w)});
  std::vector<int> h;
  for (int i = 0; i < h_petals; ++i) h.push_back(i);
  return {1, std::move(edges), 0, std::move(h)};
}

int MarkedGraph::degree(int v) const {
  int d = 0;
  for (const auto& e : edges_) d += (e.from == v ? 1 : 0) + (e.to == v ? 1 : 0);
  return d;
}

std::vector<int> MarkedGraph::non_tree_edges() const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e)
    if (!in_tree_[static_cast<std::size_t>(e)]) out.push_back(e);
  return out;
}

std::vector<Traversal> MarkedGraph::loop_path(int e) const {
  auto to_base = [&](int v) {
    std::vector<Traversal> out;
    while (parent_[static_cast<std::size_t>(v)].edge >= 0) {
      const auto p = parent_[static_cast<std::size_t>(v)];
      out.push_back({p.edge, -p.dir});
      v = tail(edges_[static_cast<std::size_t>(p.edge)], p.dir);
    }
    return out;
  };
  const auto& edge = edges_[static_cast<std::size_t>(e)];
  std::vector<Traversal> path = to_base(edge.from);
  std::reverse(path.begin(), path.end());
  for (auto& t : path) t.dir = -t.dir;
  path.push_back({e, 1});
  const auto back = to_base(edge.to);
  path.insert(path.end(), back.begin(), back.end());
  return path;
}

std::vector<Word> MarkedGraph::loop_basis() const {
  std::vector<Word> out;
  for (int e : non_tree_edges()) {
    Word w;
    for (const auto& t : loop_path(e)) w *= oriented(edges_[static_cast<std::size_t>(t.edge)], t.dir);
    out.push_back(std::move(w));
  }
  return out;
}

MarkedGraph normalize(const MarkedGraph& g) {
  const std::set<int> h(g.h_edges().begin(), g.h_edges().end());
  std::vector<MarkedEdge> edges = g.edges();
  std::vector<bool> alive(edges.size(), true);
  std::vector<bool> keep_edge(edges.size(), false);
  for (int e : h) keep_edge[static_cast<std::size_t>(e)] = true;
  auto ends_at = [&](int v) {
    std::vector<std::pair<int, int>> out;  // (edge, dir leaving v)
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      if (!alive[static_cast<std::size_t>(e)]) continue;
      if (edges[static_cast<std::size_t>(e)].from == v) out.push_back({e, 1});
      if (edges[static_cast<std::size_t>(e)].to == v) out.push_back({e, -1});
    }
    return out;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (v == g.base()) continue;
      const auto ends = ends_at(v);
      if (ends.size() == 1 && !keep_edge[static_cast<std::size_t>(ends[0].first)]) {
        alive[static_cast<std::size_t>(ends[0].first)] = false;
        changed = true;
      } else if (ends.size() == 2 && ends[0].first != ends[1].first &&
                 !keep_edge[static_cast<std::size_t>(ends[0].first)] &&
                 !keep_edge[static_cast<std::size_t>(ends[1].first)]) {
        const auto [e1, d1] = ends[0];
        const auto [e2, d2] = ends[1];
        const auto& in = edges[static_cast<std::size_t>(e1)];
        const auto& out = edges[static_cast<std::size_t>(e2)];
        // Arrive along e1 (reversed leaving direction), leave along e2.
        MarkedEdge merged{tail(in, -d1), head(out, d2), oriented(in, -d1) * oriented(out, d2)};
        edges[static_cast<std::size_t>(e1)] = std::move(merged);
        alive[static_cast<std::size_t>(e2)] = false;
        changed = true;
      }
    }
  }
  std::vector<int> vertex_id(static_cast<std::size_t>(g.vertex_count()), -1);
  int nv = 0;
  auto id_of = [&](int v) {
    if (vertex_id[static_cast<std::size_t>(v)] == -1) vertex_id[static_cast<std::size_t>(v)] = nv++;
    return vertex_id[static_cast<std::size_t>(v)];
  };
  id_of(g.base());
  std::vector<int> edge_id(edges.size(), -1);
  std::vector<MarkedEdge> kept;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!alive[e]) continue;
    edge_id[e] = static_cast<int>(kept.size());
    kept.push_back({id_of(edges[e].from), id_of(edges[e].to), edges[e].label});
  }
  std::vector<int> h_new;
  for (int e : g.h_edges()) h_new.push_back(edge_id[static_cast<std::size_t>(e)]);
  return {nv, std::move(kept), 0, std::move(h_new)};
}

FactorVertex subgraph_factor(const MarkedGraph& g, const std::vector<int>& ids) {
  const auto shape = shape_of(g, ids);
  if (!shape.connected) throw InputError("subgraph is empty or disconnected");
  const auto mask = edge_mask(g.edges().size(), ids);
  const int root = g.edges()[static_cast<std::size_t>(ids[0])].from;
  Forest f = seeded(g.edges(), g.vertex_count(), mask, root);
  std::deque<int> frontier;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (f.parent[static_cast<std::size_t>(v)].edge != -2) frontier.push_back(v);
  f = grow(g.edges(), g.vertex_count(), std::vector<bool>(g.edges().size(), true), std::move(f),
           std::move(frontier));

  std::vector<Word> inside;
  std::vector<Word> outside;
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    if (f.tree_edge[static_cast<std::size_t>(e)]) continue;
    const auto& edge = g.edges()[static_cast<std::size_t>(e)];
    Word w = f.word[static_cast<std::size_t>(edge.from)] * edge.label *
             f.word[static_cast<std::size_t>(edge.to)].inverse();
    (mask[static_cast<std::size_t>(e)] ? inside : outside).push_back(std::move(w));
  }
  auto extension = concat(inside, outside);
  return FactorVertex::with_extension(std::move(inside), std::move(extension));
}

namespace {

int h_rank(const MarkedGraph& g) {
  if (g.h_edges().empty()) throw InputError("graph has no distinguished subgraph");
  return shape_of(g, g.h_edges()).rank;
}

}  // namespace

std::vector<PiElement> pi_of(const MarkedGraph& g) {
  const MarkedGraph ng = normalize(g);
  const int rh = h_rank(ng);
  const int n = ng.rank();
  const std::set<int> h(ng.h_edges().begin(), ng.h_edges().end());
  std::vector<int> others;
  for (int e = 0; e < static_cast<int>(ng.edges().size()); ++e)
    if (!h.count(e)) others.push_back(e);
  if (others.size() > 20) throw InputError("too many edges for subgraph enumeration");

  std::vector<PiElement> out;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << others.size()); ++mask) {
    std::vector<int> ids(ng.h_edges());
    for (std::size_t i = 0; i < others.size(); ++i)
      if (mask >> i & 1U) ids.push_back(others[i]);
    const auto shape = shape_of(ng, ids);
    if (!shape.connected || shape.rank <= rh || shape.rank >= n) continue;
    FactorVertex v = subgraph_factor(ng, ids);
    if (std::any_of(out.begin(), out.end(), [&](const PiElement& p) { return same_vertex(p.vertex, v); }))
      continue;
    std::sort(ids.begin(), ids.end());
    out.push_back({std::move(v), std::move(ids)});
  }
  return out;
}

std::vector<FactorVertex> pi_diameter_path(const MarkedGraph& g, const FactorVertex& p,
                                           const FactorVertex& q) {
  const MarkedGraph ng = normalize(g);
  const int n = ng.rank();
  const int rh = h_rank(ng);
  if (n - rh < 3) throw MathError("distinguished subgraph has corank below 3");
  const auto pi = pi_of(g);
  auto find = [&](const FactorVertex& x) -> const PiElement& {
    for (const auto& e : pi)
      if (same_vertex(e.vertex, x)) return e;
    throw InputError("vertex is not carried by a subgraph containing the distinguished one");
  };
  const PiElement& ep = find(p);
  const PiElement& eq = find(q);
  if (same_vertex(p, q)) return {p};

  const int m = static_cast<int>(ng.edges().size());
  const std::set<int> h(ng.h_edges().begin(), ng.h_edges().end());
  auto all_but = [&](std::set<int> drop) {
    std::vector<int> ids;
    for (int e = 0; e < m; ++e)
      if (!drop.count(e)) ids.push_back(e);
    return ids;
  };
  const std::set<int> in_p(ep.edges.begin(), ep.edges.end());
  const std::set<int> in_q(eq.edges.begin(), eq.edges.end());
  for (int drop_p = 0; drop_p < m; ++drop_p) {
    if (in_p.count(drop_p)) continue;
    const auto p_big = all_but({drop_p});
    if (!shape_of(ng, p_big).connected) continue;
    for (int drop_q = 0; drop_q < m; ++drop_q) {
      if (in_q.count(drop_q)) continue;
      const auto q_big = all_but({drop_q});
      if (!shape_of(ng, q_big).connected) continue;

      // A circle outside H inside both big subgraphs, tied to H by tree paths.
      const auto common = edge_mask(static_cast<std::size_t>(m), all_but({drop_p, drop_q}));
      const int root = ng.edges()[static_cast<std::size_t>(*h.begin())].from;
      Forest f = seeded(ng.edges(), ng.vertex_count(), edge_mask(static_cast<std::size_t>(m), ng.h_edges()),
                        root);
      std::deque<int> frontier;
      for (int v = 0; v < ng.vertex_count(); ++v)
        if (f.parent[static_cast<std::size_t>(v)].edge != -2) frontier.push_back(v);
      std::vector<bool> in_h_vertex(static_cast<std::size_t>(ng.vertex_count()), false);
      for (int v : frontier) in_h_vertex[static_cast<std::size_t>(v)] = true;
      f = grow(ng.edges(), ng.vertex_count(), common, std::move(f), std::move(frontier));
      int circle = -1;
      for (int e = 0; e < m && circle < 0; ++e) {
        const auto& edge = ng.edges()[static_cast<std::size_t>(e)];
        if (common[static_cast<std::size_t>(e)] && !h.count(e) && !f.tree_edge[static_cast<std::size_t>(e)] &&
            f.parent[static_cast<std::size_t>(edge.from)].edge != -2)
          circle = e;
      }
      if (circle < 0) continue;
      std::set<int> r_edges(h.begin(), h.end());
      r_edges.insert(circle);
      for (int v : {ng.edges()[static_cast<std::size_t>(circle)].from,
                    ng.edges()[static_cast<std::size_t>(circle)].to}) {
        while (!in_h_vertex[static_cast<std::size_t>(v)]) {
          const auto t = f.parent[static_cast<std::size_t>(v)];
          r_edges.insert(t.edge);
          v = tail(ng.edges()[static_cast<std::size_t>(t.edge)], t.dir);
        }
      }
      std::vector<FactorVertex> path{p, subgraph_factor(ng, p_big),
                                     subgraph_factor(ng, {r_edges.begin(), r_edges.end()}),
                                     subgraph_factor(ng, q_big), q};
      if (valid_path(path)) return tidy_path(path);
    }
  }
  throw MathError("no path through codimension-one subgraphs was found");
}

FoldSequence fold_sequence(const MarkedGraph& rose, const std::vector<Word>& target_basis) {
  if (!rose.is_rose()) throw InputError("fold sequences start from a rose");
  const int n = rose.rank();
  if (static_cast<int>(target_basis.size()) != n) throw InputError("target basis has the wrong rank");
  for (const auto& w : target_basis)
    if (w.max_generator() > n) throw InputError("target word beyond rank");
  if (!spans_as_basis(target_basis, n)) throw MathError("target is not a basis");

  std::vector<Word> marking;
  for (const auto& e : rose.edges()) marking.push_back(e.label);
  const BasisChange source(marking);
  std::vector<Word> target_in_source;
  for (const auto& w : target_basis) target_in_source.push_back(source.to_new(w));
  const auto to_standard = is_basis(target_in_source, n).transcript;

  std::vector<bool> in_h(static_cast<std::size_t>(n), false);
  for (int e : rose.h_edges()) in_h[static_cast<std::size_t>(e)] = true;
  auto h_list = [&](bool subdivided, int split) {
    std::vector<int> out;
    for (int e = 0; e < n; ++e)
      if (in_h[static_cast<std::size_t>(e)]) out.push_back(e);
    if (subdivided && in_h[static_cast<std::size_t>(split)]) out.push_back(n);
    return out;
  };
  auto rose_of = [&](const std::vector<Word>& m) {
    std::vector<MarkedEdge> edges;
    for (const auto& w : m) edges.push_back({0, 0, w});
    return MarkedGraph(1, std::move(edges), 0, h_list(false, 0));
  };

  FoldSequence seq{rose, {}, {}, rose};
  std::vector<NielsenMove> relabels;
  for (auto it = to_standard.rbegin(); it != to_standard.rend(); ++it) {
    const NielsenMove move = inverse_move(*it);
    const auto i = static_cast<std::size_t>(move.i);
    const auto j = static_cast<std::size_t>(move.j);
    if (move.kind == NielsenMove::Kind::Swap) {
      apply_move(marking, move);
      const bool hi = in_h[i];
      in_h[i] = in_h[j];
      in_h[j] = hi;
      relabels.push_back(move);
      continue;
    }
    if (move.kind == NielsenMove::Kind::Invert) {
      apply_move(marking, move);
      relabels.push_back(move);
      continue;
    }
    const Word mj = power(marking[j], move.sign);
    std::vector<MarkedEdge> edges;
    for (const auto& w : marking) edges.push_back({0, 0, w});
    FoldStep step;
    if (move.kind == NielsenMove::Kind::RightMultiply) {
      // petal i = e1 e2 with e2 = (petal j)^-sign folded onto petal j at v.
      edges[i] = {0, 1, marking[i] * mj};
      edges.push_back({1, 0, mj.inverse()});
      step = {0, {n, false}, {move.j, move.sign > 0}};
    } else {
      // petal i = e1 e2 with e1 = (petal j)^-sign folded onto petal j at v.
      edges[i] = {0, 1, mj.inverse()};
      edges.push_back({1, 0, mj * marking[i]});
      step = {0, {move.i, true}, {move.j, move.sign < 0}};
    }
    auto outward = [&](const Direction& d) {
      const auto& e = edges[static_cast<std::size_t>(d.edge)];
      return d.start ? e.label : e.label.inverse();
    };
    if (outward(step.first) != outward(step.second)) throw MathError("fold pairs edges with different labels");
    MarkedGraph subdivided(2, std::move(edges), 0, h_list(true, move.i));
    apply_move(marking, move);
    seq.stages.push_back(
        {std::move(relabels), std::move(subdivided), step, rose_of(marking), move, in_h[i] || in_h[j]});
    relabels.clear();
  }
  seq.relabel_after = std::move(relabels);
  if (marking != target_basis) throw MathError("fold sequence missed the target marking");
  seq.finish = rose_of(marking);
  return seq;
}

namespace {

// A basis of the free group beginning with A's generators and then a
// complement of A inside a conjugate of X containing A.
std::vector<Word> marking_through(const FactorVertex& x, const FactorVertex& a) {
  const auto c = conjugator_into(a.generators(), x.generators());
  if (!c) throw MathError("vertex does not contain A up to conjugation");
  std::vector<Word> ext;
  for (const auto& w : x.extension()) ext.push_back(conjugate(w, *c));
  const BasisChange coords(ext);
  const int k = x.subgroup_rank();
  std::vector<Word> a_in;
  for (const auto& w : a.generators()) {
    a_in.push_back(coords.to_new(w));
    if (a_in.back().max_generator() > k) throw MathError("A is not inside the conjugated vertex");
  }
  const auto m = minimize_tuple(a_in, k);
  if (!m.free_factor) throw MathError("A is not a free factor of the vertex");
  std::vector<Word> marking = a.generators();
  for (const auto& w : m.complement) marking.push_back(coords.to_old(w));
  marking.insert(marking.end(), ext.begin() + k, ext.end());
  return marking;
}

}  // namespace

std::vector<FactorVertex> upward_path(const FactorVertex& x, const FactorVertex& y, const FactorVertex& a) {
  const int n = a.ambient_rank();
  if (x.ambient_rank() != n || y.ambient_rank() != n) throw InputError("vertices of different ambient rank");
  if (n - a.subgroup_rank() < 3) throw MathError("A has corank below 3");
  if (same_vertex(x, y)) return {x};
  const int h = a.subgroup_rank();
  const MarkedGraph gx = MarkedGraph::rose(marking_through(x, a), h);
  const FoldSequence seq = fold_sequence(gx, marking_through(y, a));

  std::vector<const MarkedGraph*> roses{&seq.start};
  for (std::size_t s = 0; s + 1 < seq.stages.size(); ++s) roses.push_back(&seq.stages[s].folded);
  roses.push_back(&seq.finish);

  std::vector<FactorVertex> path{x};
  FactorVertex current = x;
  auto extend = [&](const MarkedGraph& g, const FactorVertex& to) {
    const auto piece = pi_diameter_path(g, current, to);
    path.insert(path.end(), piece.begin() + 1, piece.end());
    current = to;
  };
  std::vector<PiElement> pi_here = pi_of(*roses[0]);
  for (std::size_t k = 0; k + 1 < roses.size(); ++k) {
    std::vector<PiElement> pi_next = pi_of(*roses[k + 1]);
    auto in_next = [&](const FactorVertex& v) {
      return std::any_of(pi_next.begin(), pi_next.end(),
                         [&](const PiElement& e) { return same_vertex(e.vertex, v); });
    };
    if (!in_next(current)) {
      const PiElement* bridge = nullptr;
      for (const auto& e : pi_here)
        if (in_next(e.vertex)) {
          bridge = &e;
          break;
        }
      if (!bridge) throw MathError("consecutive graphs carry no common factor");
      extend(*roses[k], bridge->vertex);
    }
    pi_here = std::move(pi_next);
  }
  extend(*roses.back(), y);
  return tidy_path(path);
}

std::vector<Traversal> cyclic_edge_path(const MarkedGraph& g, const Word& w) {
  if (w.max_generator() > g.rank()) throw InputError("word beyond the graph rank");
  const auto nte = g.non_tree_edges();
  const Word v = BasisChange(g.loop_basis()).to_new(w);
  std::vector<Traversal> out;
  auto push = [&](Traversal t) {
    if (!out.empty() && out.back().edge == t.edge && out.back().dir == -t.dir)
      out.pop_back();
    else
      out.push_back(t);
  };
  for (Letter x : v) {
    auto loop = g.loop_path(nte[static_cast<std::size_t>(generator_of(x) - 1)]);
    if (x < 0) {
      std::reverse(loop.begin(), loop.end());
      for (auto& t : loop) t.dir = -t.dir;
    }
    for (const auto& t : loop) push(t);
  }
  std::size_t lo = 0;
  std::size_t hi = out.size();
  while (hi - lo >= 2 && out[lo].edge == out[hi - 1].edge && out[lo].dir == -out[hi - 1].dir) {
    ++lo;
    --hi;
  }
  if (lo == hi) throw MathError("word is trivial in this marking");
  return {out.begin() + static_cast<std::ptrdiff_t>(lo), out.begin() + static_cast<std::ptrdiff_t>(hi)};
}

namespace {

Direction leaving(const Traversal& t) { return {t.edge, t.dir > 0}; }
Direction arriving(const Traversal& t) { return {t.edge, t.dir < 0}; }

// Directions of a graph with e edges, indexed 2 * edge + (start ? 0 : 1).
using DirectionMap = std::vector<int>;

int dindex(const Direction& d) { return 2 * d.edge + (d.start ? 0 : 1); }

DirectionMap identity_map(int edges) {
  DirectionMap m(static_cast<std::size_t>(2 * edges));
  for (int k = 0; k < 2 * edges; ++k) m[static_cast<std::size_t>(k)] = k;
  return m;
}

// Rose directions before a swap or inversion to directions after it.
DirectionMap relabel_map(int n, const NielsenMove& m) {
  DirectionMap out = identity_map(n);
  if (m.kind == NielsenMove::Kind::Swap) {
    for (int end = 0; end < 2; ++end) {
      out[static_cast<std::size_t>(2 * m.i + end)] = 2 * m.j + end;
      out[static_cast<std::size_t>(2 * m.j + end)] = 2 * m.i + end;
    }
  } else {
    out[static_cast<std::size_t>(2 * m.i)] = 2 * m.i + 1;
    out[static_cast<std::size_t>(2 * m.i + 1)] = 2 * m.i;
  }
  return out;
}

// Subdivided rose (n + 1 edges) to the folded rose.
DirectionMap fold_map(int n, const NielsenMove& m) {
  DirectionMap out = identity_map(n + 1);
  out.resize(static_cast<std::size_t>(2 * n + 2));
  // The edge that lands on petal j, traversed as (petal j)^-sign.
  const int onto = m.kind == NielsenMove::Kind::RightMultiply ? n : m.i;
  const int kept = m.kind == NielsenMove::Kind::RightMultiply ? m.i : n;
  const bool forward = m.sign < 0;
  out[static_cast<std::size_t>(2 * onto)] = 2 * m.j + (forward ? 0 : 1);
  out[static_cast<std::size_t>(2 * onto + 1)] = 2 * m.j + (forward ? 1 : 0);
  out[static_cast<std::size_t>(2 * kept)] = 2 * m.i;
  out[static_cast<std::size_t>(2 * kept + 1)] = 2 * m.i + 1;
  return out;
}

// Rose to its subdivision at petal i (petal i becomes edges i then n).
DirectionMap subdivide_map(int n, int i) {
  DirectionMap out = identity_map(n);
  out[static_cast<std::size_t>(2 * i + 1)] = 2 * n + 1;
  return out;
}

DirectionMap compose(const DirectionMap& first, const DirectionMap& then) {
  DirectionMap out(first.size());
  for (std::size_t k = 0; k < first.size(); ++k)
    out[k] = then[static_cast<std::size_t>(first[k])];
  return out;
}

WCoreState track(const MarkedGraph& g, const Word& w,
                 const std::function<bool(const Direction&, const Direction&)>& identified) {
  WCoreState s;
  s.path = cyclic_edge_path(g, w);
  s.core_length = static_cast<int>(s.path.size());
  s.edge_count = static_cast<int>(g.edges().size());
  std::vector<int> illegal;
  for (std::size_t k = 0; k < s.path.size(); ++k)
    if (identified(arriving(s.path[k]), leaving(s.path[(k + 1) % s.path.size()])))
      illegal.push_back(static_cast<int>(k));
  s.has_illegal_turn = !illegal.empty();
  if (illegal.empty()) {
    s.max_legal_run = s.core_length;
  } else {
    s.max_legal_run = s.core_length - illegal.back() + illegal.front();
    for (std::size_t k = 0; k + 1 < illegal.size(); ++k)
      s.max_legal_run = std::max(s.max_legal_run, illegal[k + 1] - illegal[k]);
  }
  return s;
}

}  // namespace

std::vector<WCoreState> w_core_diagnostic(const FoldSequence& seq, const Word& w, GateRule rule) {
  if (w.empty() || !is_cyclically_reduced(w)) throw InputError("w must be nontrivial and cyclically reduced");
  if (is_proper_power(w)) throw InputError("w must not be a proper power");
  const int n = seq.finish.rank();
  const std::size_t stages = seq.stages.size();

  // residual[k]: directions of stage k's subdivided graph to the final rose.
  std::vector<DirectionMap> residual(stages);
  DirectionMap to_final = identity_map(n);
  for (auto it = seq.relabel_after.rbegin(); it != seq.relabel_after.rend(); ++it)
    to_final = compose(relabel_map(n, *it), to_final);
  for (std::size_t k = stages; k-- > 0;) {
    const auto& stage = seq.stages[k];
    residual[k] = compose(fold_map(n, stage.move), to_final);
    DirectionMap into = subdivide_map(n, stage.move.i);
    for (auto it = stage.relabel_before.rbegin(); it != stage.relabel_before.rend(); ++it)
      into = compose(relabel_map(n, *it), into);
    to_final = compose(into, residual[k]);
  }

  std::vector<WCoreState> states;
  for (std::size_t k = 0; k < stages; ++k) {
    const auto& stage = seq.stages[k];
    std::function<bool(const Direction&, const Direction&)> identified;
    if (rule == GateRule::NextFold) {
      const std::set<Direction> gate{stage.fold.first, stage.fold.second};
      identified = [gate](const Direction& x, const Direction& y) {
        return x != y && std::set<Direction>{x, y} == gate;
      };
    } else {
      const DirectionMap& f = residual[k];
      identified = [&f](const Direction& x, const Direction& y) {
        return x != y && f[static_cast<std::size_t>(dindex(x))] == f[static_cast<std::size_t>(dindex(y))];
      };
    }
    states.push_back(track(stage.subdivided, w, identified));
  }
  states.push_back(track(seq.finish, w, [](const Direction&, const Direction&) { return false; }));

  long total = 0;
  for (const auto& s : states) total += s.edge_count;
  const long count = static_cast<long>(states.size());
  const int threshold = static_cast<int>(2 * ((total + count - 1) / count));
  for (auto& s : states) s.phase = s.has_illegal_turn ? 1 : (s.core_length <= threshold ? 2 : 3);
  return states;
}

bool illegal_turns_form_prefix(const std::vector<WCoreState>& states) {
  for (std::size_t k = 0; k + 1 < states.size(); ++k)
    if (!states[k].has_illegal_turn && states[k + 1].has_illegal_turn) return false;
  return true;
}

}  // namespace ffc
