#include "ffc/stallings.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <utility>

#include "ffc/errors.hpp"

namespace ffc {

// Union-find based folding of labeled graphs. Adjacency maps a signed letter
// to the neighbor reached by reading it, so each edge appears twice.
class GraphFolder {
 public:
  int add_vertex() {
    parent_.push_back(static_cast<int>(parent_.size()));
    adj_.emplace_back();
    return parent_.back();
  }

  int find(int x) {
    while (parent_[idx(x)] != x) {
      parent_[idx(x)] = parent_[idx(parent_[idx(x)])];
      x = parent_[idx(x)];
    }
    return x;
  }

  void add_edge(int u, Letter l, int v) {
    u = find(u);
    v = find(v);
    auto& au = adj_[idx(u)];
    if (auto it = au.find(l); it != au.end()) {
      merge(it->second, v);
    } else if (auto jt = adj_[idx(v)].find(-l); jt != adj_[idx(v)].end()) {
      merge(jt->second, u);
    } else {
      au[l] = v;
      adj_[idx(v)][-l] = u;
    }
  }

  void add_word_loop(int base, const Word& w) {
    if (w.empty()) return;
    int u = base;
    for (std::size_t i = 0; i < w.size(); ++i) {
      int v = (i + 1 == w.size()) ? base : add_vertex();
      add_edge(u, w[i], v);
      u = v;
    }
  }

  // Removes vertices of degree <= 1 other than `keep` (-1 keeps nothing).
  void prune(int keep) {
    if (keep >= 0) keep = find(keep);
    std::vector<int> live;
    for (int v = 0; v < static_cast<int>(parent_.size()); ++v)
      if (find(v) == v) live.push_back(v);
    std::deque<int> queue(live.begin(), live.end());
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      if (v == keep || removed_.count(v) || adj_[idx(v)].size() > 1) continue;
      removed_.insert(v);
      for (auto [l, t] : adj_[idx(v)]) {
        int w = find(t);
        adj_[idx(w)].erase(-l);
        queue.push_back(w);
      }
      adj_[idx(v)].clear();
    }
  }

  CoreGraph build(std::optional<int> basepoint) {
    std::optional<int> base = basepoint ? std::optional<int>(find(*basepoint)) : std::nullopt;
    // Breadth-first numbering from the basepoint (or smallest live vertex).
    std::vector<int> order;
    std::unordered_map<int, int> number;
    auto visit_from = [&](int start) {
      std::deque<int> q{start};
      number[start] = static_cast<int>(order.size());
      order.push_back(start);
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (auto [l, t] : adj_[idx(v)]) {
          int w = find(t);
          if (!number.count(w)) {
            number[w] = static_cast<int>(order.size());
            order.push_back(w);
            q.push_back(w);
          }
        }
      }
    };
    if (base && !removed_.count(*base)) visit_from(*base);
    for (int v = 0; v < static_cast<int>(parent_.size()); ++v)
      if (find(v) == v && !removed_.count(v) && !number.count(v)) visit_from(v);

    CoreGraph g;
    g.adj_.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (auto [l, t] : adj_[idx(order[i])]) {
        int j = number.at(find(t));
        g.adj_[i][l] = j;
        if (l > 0) g.edges_.push_back({static_cast<int>(i), j, l});
      }
    }
    if (base && number.count(*base)) g.basepoint_ = number.at(*base);
    return g;
  }

 private:
  static std::size_t idx(int v) { return static_cast<std::size_t>(v); }

  void merge(int x, int y) {
    std::vector<std::pair<int, int>> pending{{x, y}};
    while (!pending.empty()) {
      auto [a, b] = pending.back();
      pending.pop_back();
      a = find(a);
      b = find(b);
      if (a == b) continue;
      if (adj_[idx(a)].size() < adj_[idx(b)].size()) std::swap(a, b);
      parent_[idx(b)] = a;
      auto moved = std::move(adj_[idx(b)]);
      adj_[idx(b)].clear();
      auto& aa = adj_[idx(a)];
      for (auto [l, t] : moved) {
        int tt = find(t);
        if (auto it = aa.find(l); it != aa.end()) {
          int t2 = find(it->second);
          if (t2 != tt) pending.emplace_back(t2, tt);
        } else {
          aa[l] = tt;
        }
      }
    }
  }

  std::vector<int> parent_;
  std::vector<std::map<Letter, int>> adj_;
  std::set<int> removed_;
};

CoreGraph CoreGraph::from_edges(int vertex_count, std::vector<Edge> edges,
                                std::optional<int> basepoint) {
  if (vertex_count < 1) throw InputError("core graph needs at least one vertex");
  CoreGraph g;
  g.adj_.resize(static_cast<std::size_t>(vertex_count));
  auto check = [&](int v) {
    if (v < 0 || v >= vertex_count) throw InputError("edge endpoint out of range");
  };
  for (const auto& e : edges) {
    check(e.from);
    check(e.to);
    if (e.label <= 0 || e.label > kMaxRank) throw InputError("edge label out of range");
    auto& out = g.adj_[static_cast<std::size_t>(e.from)];
    auto& in = g.adj_[static_cast<std::size_t>(e.to)];
    if (out.count(e.label) || in.count(-e.label))
      throw InputError("graph is not folded");
    out[e.label] = e.to;
    in[-e.label] = e.from;
  }
  if (basepoint) check(*basepoint);
  g.edges_ = std::move(edges);
  g.basepoint_ = basepoint;
  return g;
}

std::optional<int> CoreGraph::follow(int v, Letter x) const {
  const auto& m = adj_[static_cast<std::size_t>(v)];
  auto it = m.find(x);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::optional<Word> CoreGraph::path_word(int u, int v) const {
  std::vector<std::pair<int, Letter>> prev(adj_.size(), {-1, 0});
  std::vector<bool> seen(adj_.size(), false);
  std::deque<int> q{u};
  seen[static_cast<std::size_t>(u)] = true;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    if (x == v) break;
    for (auto [l, t] : adj_[static_cast<std::size_t>(x)]) {
      if (!seen[static_cast<std::size_t>(t)]) {
        seen[static_cast<std::size_t>(t)] = true;
        prev[static_cast<std::size_t>(t)] = {x, l};
        q.push_back(t);
      }
    }
  }
  if (!seen[static_cast<std::size_t>(v)]) return std::nullopt;
  std::vector<Letter> rev;
  for (int x = v; x != u; x = prev[static_cast<std::size_t>(x)].first)
    rev.push_back(prev[static_cast<std::size_t>(x)].second);
  std::reverse(rev.begin(), rev.end());
  return Word::reduce(rev);
}

bool CoreGraph::is_rose(int rank) const {
  return vertex_count() == 1 && static_cast<int>(edges_.size()) == rank;
}

CoreGraph::CyclicCore CoreGraph::cyclic_core() const {
  GraphFolder f;
  for (int v = 0; v < vertex_count(); ++v) f.add_vertex();
  for (const auto& e : edges_) f.add_edge(e.from, e.label, e.to);
  f.prune(-1);
  CoreGraph core = f.build(std::nullopt);
  if (core.vertex_count() == 0 || !basepoint_) return {core, {}};

  // The hair runs from the basepoint to the first vertex that survives.
  // Surviving vertices keep their relative order under build(), so map by
  // structure: locate the hair endpoint, then renumber the core from it.
  std::vector<bool> survives(adj_.size(), false);
  {
    std::vector<int> deg(adj_.size());
    for (std::size_t v = 0; v < adj_.size(); ++v) deg[v] = static_cast<int>(adj_[v].size());
    std::vector<bool> gone(adj_.size(), false);
    std::deque<int> q;
    for (std::size_t v = 0; v < adj_.size(); ++v)
      if (deg[v] <= 1) q.push_back(static_cast<int>(v));
    while (!q.empty()) {
      auto v = static_cast<std::size_t>(q.front());
      q.pop_front();
      if (gone[v] || deg[v] > 1) continue;
      gone[v] = true;
      for (auto [l, t] : adj_[v]) {
        auto st = static_cast<std::size_t>(t);
        if (!gone[st] && --deg[st] <= 1) q.push_back(t);
      }
    }
    for (std::size_t v = 0; v < adj_.size(); ++v) survives[v] = !gone[v];
  }
  // BFS from basepoint to nearest surviving vertex.
  std::vector<std::pair<int, Letter>> prev(adj_.size(), {-1, 0});
  std::vector<bool> seen(adj_.size(), false);
  std::deque<int> q{*basepoint_};
  seen[static_cast<std::size_t>(*basepoint_)] = true;
  int root = -1;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    if (survives[static_cast<std::size_t>(x)]) {
      root = x;
      break;
    }
    for (auto [l, t] : adj_[static_cast<std::size_t>(x)]) {
      if (!seen[static_cast<std::size_t>(t)]) {
        seen[static_cast<std::size_t>(t)] = true;
        prev[static_cast<std::size_t>(t)] = {x, l};
        q.push_back(t);
      }
    }
  }
  std::vector<Letter> rev;
  for (int x = root; x != *basepoint_; x = prev[static_cast<std::size_t>(x)].first)
    rev.push_back(prev[static_cast<std::size_t>(x)].second);
  std::reverse(rev.begin(), rev.end());

  // Rebuild the core restricted to surviving vertices, numbered from root.
  GraphFolder g;
  std::vector<int> id(adj_.size(), -1);
  for (std::size_t v = 0; v < adj_.size(); ++v)
    if (survives[v]) id[v] = g.add_vertex();
  for (const auto& e : edges_)
    if (survives[static_cast<std::size_t>(e.from)] && survives[static_cast<std::size_t>(e.to)])
      g.add_edge(id[static_cast<std::size_t>(e.from)], e.label, id[static_cast<std::size_t>(e.to)]);
  return {g.build(id[static_cast<std::size_t>(root)]), Word::reduce(rev)};
}

CoreGraph fold(std::span<const Word> generators) {
  GraphFolder f;
  int base = f.add_vertex();
  for (const auto& w : generators) f.add_word_loop(base, w);
  f.prune(base);
  return f.build(base);
}

bool contains(const CoreGraph& subgroup, const Word& w) {
  if (!subgroup.basepoint()) throw InputError("membership needs a basepointed graph");
  int v = *subgroup.basepoint();
  for (Letter x : w) {
    auto next = subgroup.follow(v, x);
    if (!next) return false;
    v = *next;
  }
  return v == *subgroup.basepoint();
}

namespace {

// Tries to extend v0 -> u to a label-preserving map of `h` into `x`.
bool immerses(const CoreGraph& h, int v0, const CoreGraph& x, int u) {
  std::vector<int> image(static_cast<std::size_t>(h.vertex_count()), -1);
  image[static_cast<std::size_t>(v0)] = u;
  std::deque<int> q{v0};
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    int mv = image[static_cast<std::size_t>(v)];
    for (auto [l, to] : h.neighbors(v)) {
      auto t = x.follow(mv, l);
      if (!t) return false;
      int& mt = image[static_cast<std::size_t>(to)];
      if (mt == -1) {
        mt = *t;
        q.push_back(to);
      } else if (mt != *t) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::optional<Word> conjugator_into(std::span<const Word> h, std::span<const Word> x) {
  auto hc = fold(h).cyclic_core();
  if (hc.core.vertex_count() == 0) return Word{};
  auto xc = fold(x).cyclic_core();
  if (xc.core.vertex_count() == 0) return std::nullopt;
  const int v0 = *hc.core.basepoint();
  const int rx = *xc.core.basepoint();
  for (int u = 0; u < xc.core.vertex_count(); ++u) {
    if (!immerses(hc.core, v0, xc.core, u)) continue;
    Word r = *xc.core.path_word(rx, u);
    return hc.hair * r.inverse() * xc.hair.inverse();
  }
  return std::nullopt;
}

bool is_conjugate_into(std::span<const Word> h, std::span<const Word> x) {
  return conjugator_into(h, x).has_value();
}

void apply_move(std::vector<Word>& t, const NielsenMove& m) {
  auto at = [&](int k) -> Word& {
    if (k < 0 || k >= static_cast<int>(t.size())) throw InputError("Nielsen move index out of range");
    return t[static_cast<std::size_t>(k)];
  };
  switch (m.kind) {
    case NielsenMove::Kind::Swap:
      std::swap(at(m.i), at(m.j));
      break;
    case NielsenMove::Kind::Invert:
      at(m.i) = at(m.i).inverse();
      break;
    case NielsenMove::Kind::RightMultiply:
      at(m.i) = at(m.i) * power(at(m.j), m.sign);
      break;
    case NielsenMove::Kind::LeftMultiply:
      at(m.i) = power(at(m.j), m.sign) * at(m.i);
      break;
  }
}

NielsenMove inverse_move(const NielsenMove& m) {
  NielsenMove out = m;
  if (m.kind == NielsenMove::Kind::RightMultiply || m.kind == NielsenMove::Kind::LeftMultiply)
    out.sign = -m.sign;
  return out;
}

namespace {

std::size_t total_length(const std::vector<Word>& t) {
  std::size_t n = 0;
  for (const auto& w : t) n += w.size();
  return n;
}

// Multiplication moves in their fixed scan order.
template <class F>
bool for_each_multiplication(int k, F&& f) {
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      for (int sign : {1, -1})
        for (auto kind : {NielsenMove::Kind::RightMultiply, NielsenMove::Kind::LeftMultiply})
          if (f(NielsenMove{kind, i, j, sign})) return true;
    }
  return false;
}

Word moved_entry(const std::vector<Word>& t, const NielsenMove& m) {
  const Word& ui = t[static_cast<std::size_t>(m.i)];
  const Word& uj = t[static_cast<std::size_t>(m.j)];
  Word f = m.sign > 0 ? uj : uj.inverse();
  return m.kind == NielsenMove::Kind::RightMultiply ? ui * f : f * ui;
}

std::optional<NielsenMove> first_reducing_move(const std::vector<Word>& t) {
  std::optional<NielsenMove> found;
  for_each_multiplication(static_cast<int>(t.size()), [&](const NielsenMove& m) {
    if (moved_entry(t, m).size() < t[static_cast<std::size_t>(m.i)].size()) {
      found = m;
      return true;
    }
    return false;
  });
  return found;
}

// Breadth-first search through length-preserving moves until a state admits
// a reducing move. Returns the moves to reach that state.
std::optional<NielsenTranscript> escape_plateau(const std::vector<Word>& start) {
  constexpr std::size_t kStateCap = 200000;
  struct Node {
    std::vector<Word> tuple;
    int parent;
    NielsenMove move;
  };
  std::vector<Node> nodes{{start, -1, {}}};
  std::set<std::vector<Word>> seen{start};
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    if (head > 0 && first_reducing_move(nodes[head].tuple)) {
      NielsenTranscript path;
      for (int n = static_cast<int>(head); nodes[static_cast<std::size_t>(n)].parent != -1;
           n = nodes[static_cast<std::size_t>(n)].parent)
        path.push_back(nodes[static_cast<std::size_t>(n)].move);
      std::reverse(path.begin(), path.end());
      return path;
    }
    const auto current = nodes[head].tuple;
    for_each_multiplication(static_cast<int>(current.size()), [&](const NielsenMove& m) {
      Word e = moved_entry(current, m);
      if (e.size() != current[static_cast<std::size_t>(m.i)].size()) return false;
      auto next = current;
      next[static_cast<std::size_t>(m.i)] = std::move(e);
      if (seen.insert(next).second) nodes.push_back({std::move(next), static_cast<int>(head), m});
      return false;
    });
    if (nodes.size() > kStateCap) return std::nullopt;
  }
  return std::nullopt;
}

// Nielsen-reduces a tuple known to be a basis down to the standard basis.
NielsenTranscript reduce_to_standard(std::vector<Word> t) {
  NielsenTranscript out;
  auto push = [&](const NielsenMove& m) {
    apply_move(t, m);
    out.push_back(m);
  };
  while (total_length(t) > t.size()) {
    if (auto m = first_reducing_move(t)) {
      push(*m);
      continue;
    }
    auto escape = escape_plateau(t);
    if (!escape) throw MathError("Nielsen reduction stalled on a plateau");
    for (const auto& m : *escape) push(m);
  }
  const int k = static_cast<int>(t.size());
  for (int i = 0; i < k; ++i)
    if (t[static_cast<std::size_t>(i)][0] < 0) push({NielsenMove::Kind::Invert, i, 0, 1});
  for (int i = 0; i < k; ++i) {
    int j = i;
    while (t[static_cast<std::size_t>(j)][0] != i + 1) ++j;
    if (j != i) push({NielsenMove::Kind::Swap, i, j, 1});
  }
  return out;
}

}  // namespace

bool spans_as_basis(std::span<const Word> tuple, int rank) {
  if (static_cast<int>(tuple.size()) != rank)
    throw InputError("basis test needs exactly " + std::to_string(rank) + " words");
  for (const auto& w : tuple)
    if (w.max_generator() > rank) throw InputError("word " + to_string(w) + " is beyond rank");
  return fold(tuple).is_rose(rank);
}

BasisCheck is_basis(std::span<const Word> tuple, int rank) {
  if (!spans_as_basis(tuple, rank)) return {};
  return {true, reduce_to_standard({tuple.begin(), tuple.end()})};
}

BasisChange::BasisChange(std::vector<Word> basis) : basis_(std::move(basis)) {
  const int n = rank();
  auto check = is_basis(basis_, n);
  if (!check.is_basis) throw MathError("tuple is not a basis of the free group");
  transcript_ = std::move(check.transcript);
  // Apply the same moves to the formal letters x1..xn: the result expresses
  // each standard generator in the new letters.
  std::vector<Word> formal;
  for (int i = 1; i <= n; ++i) formal.push_back(Word{i});
  for (const auto& m : transcript_) apply_move(formal, m);
  standard_in_new_ = std::move(formal);
}

Word BasisChange::to_new(const Word& w) const {
  if (w.max_generator() > rank()) throw InputError("word is beyond the basis rank");
  return substitute(w, standard_in_new_);
}

Word BasisChange::to_old(const Word& v) const {
  if (v.max_generator() > rank()) throw InputError("letter beyond the basis rank");
  return substitute(v, basis_);
}

Word rewrite_in_basis(const Word& w, std::span<const Word> basis) {
  return BasisChange({basis.begin(), basis.end()}).to_new(w);
}

namespace {

int cyclic_core_edges(const std::vector<Word>& tuple) {
  return static_cast<int>(fold(tuple).cyclic_core().core.edges().size());
}

}  // namespace

TupleMinimization minimize_tuple(std::span<const Word> tuple, int rank) {
  for (const auto& w : tuple)
    if (w.max_generator() > rank) throw InputError("word " + to_string(w) + " is beyond rank");
  TupleMinimization out;
  std::vector<Word> current(tuple.begin(), tuple.end());
  int cost = cyclic_core_edges(current);
  bool improved = true;
  while (improved) {
    improved = false;
    for_each_multiplier_automorphism(rank, [&](const WhiteheadAutomorphism& aut) {
      std::vector<Word> image;
      image.reserve(current.size());
      for (const auto& w : current) image.push_back(aut.apply(w));
      int c = cyclic_core_edges(image);
      if (c < cost) {
        cost = c;
        current = std::move(image);
        out.transcript.push_back(aut);
        improved = true;
        return true;
      }
      return false;
    });
  }
  out.core_edges = cost;
  auto cc = fold(current).cyclic_core();
  const auto& core = cc.core;
  out.free_factor = core.vertex_count() <= 1;
  if (!out.free_factor) {
    for (const auto& w : current) out.minimal.push_back(cyclic_reduce(w).core.representative());
    return out;
  }
  std::vector<bool> used(static_cast<std::size_t>(rank) + 1, false);
  for (const auto& e : core.edges()) {
    used[static_cast<std::size_t>(e.label)] = true;
    out.minimal.push_back(Word{e.label});
  }
  std::sort(out.minimal.begin(), out.minimal.end());
  for (int j = 1; j <= rank; ++j) {
    if (used[static_cast<std::size_t>(j)]) continue;
    out.complement.push_back(apply_inverse_all(out.transcript, conjugate(Word{j}, cc.hair)));
  }
  return out;
}

}  // namespace ffc
