#include "ffc/splittings.hpp"

#include <set>
#include <utility>

#include "ffc/errors.hpp"
#include "ffc/whitehead.hpp"

namespace ffc {

namespace {

std::vector<Word> concat(const std::vector<Word>& x, const std::vector<Word>& y) {
  std::vector<Word> out = x;
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

int loop_count(const RoseSplitting& s, const Word& new_word) {
  return static_cast<int>(
      new_word.count_if_generator([&](int g) { return g > s.vertex_rank(); }));
}

}  // namespace

RoseSplitting::RoseSplitting(std::vector<Word> vertex_basis, std::vector<Word> loops)
    : vertex_basis_(std::move(vertex_basis)), loops_(std::move(loops)) {
  if (loops_.empty()) throw InputError("a splitting needs at least one loop");
  coords_ = std::make_shared<const BasisChange>(concat(vertex_basis_, loops_));
}

TreeVertex canonical_vertex(const RoseSplitting& s, const Word& element_new) {
  std::size_t keep = element_new.size();
  while (keep > 0 && !s.is_loop_letter(element_new[keep - 1])) --keep;
  return {element_new.slice(0, keep)};
}

TreeVertex act(const RoseSplitting& s, const Word& g, const TreeVertex& v) {
  return canonical_vertex(s, s.coordinates().to_new(g) * v.rep);
}

TreeVertex TreeEdge::source(const RoseSplitting& s) const {
  return sign > 0 ? canonical_vertex(s, translate)
                  : canonical_vertex(s, translate * Word{s.vertex_rank() + loop + 1});
}

TreeVertex TreeEdge::target(const RoseSplitting& s) const {
  return sign > 0 ? canonical_vertex(s, translate * Word{s.vertex_rank() + loop + 1})
                  : canonical_vertex(s, translate);
}

std::vector<TreeVertex> TreePath::vertices(const RoseSplitting& s) const {
  std::vector<TreeVertex> out{start};
  for (const auto& e : edges) out.push_back(e.target(s));
  return out;
}

TreePath tree_path(const RoseSplitting& s, const TreeVertex& from, const TreeVertex& to) {
  TreePath path{from, {}};
  const Word h = from.rep.inverse() * to.rep;
  Word prefix = from.rep;
  for (Letter x : h) {
    if (s.is_loop_letter(x)) {
      const int loop = s.loop_index(x);
      if (x > 0)
        path.edges.push_back({prefix, loop, 1});
      else
        path.edges.push_back({prefix * Word{x}, loop, -1});
    }
    prefix *= Word{x};
  }
  return path;
}

int tree_distance(const RoseSplitting& s, const TreeVertex& from, const TreeVertex& to) {
  return loop_count(s, from.rep.inverse() * to.rep);
}

int translation_length(const RoseSplitting& s, const Word& g) {
  return loop_count(s, cyclic_reduce(s.coordinates().to_new(g)).core.representative());
}

std::optional<TreeVertex> elliptic_vertex(const RoseSplitting& s, const Word& g) {
  if (g.empty()) throw InputError("the identity fixes every vertex");
  auto cr = cyclic_reduce(s.coordinates().to_new(g));
  if (loop_count(s, cr.core.representative()) > 0) return std::nullopt;
  return canonical_vertex(s, cr.conjugator);
}

TreeVertex axis_point(const RoseSplitting& s, const Word& g) {
  auto cr = cyclic_reduce(s.coordinates().to_new(g));
  if (loop_count(s, cr.core.representative()) == 0)
    throw MathError("element " + to_string(g) + " is elliptic");
  return canonical_vertex(s, cr.conjugator);
}

bool on_axis(const RoseSplitting& s, const Word& g, const TreeVertex& v) {
  return tree_distance(s, v, act(s, g, v)) == translation_length(s, g);
}

TreeVertex project_to_axis(const RoseSplitting& s, const Word& g, const TreeVertex& v) {
  const TreeVertex p = axis_point(s, g);
  const Word g_new = s.coordinates().to_new(g);
  const int tau = translation_length(s, g);
  for (const auto& x : tree_path(s, v, p).vertices(s))
    if (tree_distance(s, x, canonical_vertex(s, g_new * x.rep)) == tau) return x;
  return p;
}

TreePath axis_window(const RoseSplitting& s, const Word& g, int k) {
  if (k < 1) throw InputError("axis window needs k >= 1");
  const TreeVertex p = axis_point(s, g);
  return tree_path(s, p, act(s, power(g, k), p));
}

TwistContext::TwistContext(std::vector<Word> a, std::vector<Word> b_factor, Word w, Word b)
    : a_(std::move(a)), b_factor_(std::move(b_factor)), w_(std::move(w)), b_(std::move(b)) {
  if (a_.empty() || b_factor_.empty()) throw InputError("context: A and B must be nontrivial");
  const int n = rank();
  for (const auto& x : concat(a_, b_factor_))
    if (x.max_generator() > n) throw InputError("context: word " + to_string(x) + " exceeds rank");
  if (!spans_as_basis(concat(a_, b_factor_), n))
    throw InputError("context: A and B together are not a basis");
  const CoreGraph b_graph = fold(b_factor_);
  if (w_.empty() || !contains(b_graph, w_)) throw InputError("context: w is not in B");
  if (!is_cyclically_reduced(w_)) throw InputError("context: w is not cyclically reduced");
  if (is_proper_power(w_)) throw InputError("context: w is a proper power");
  if (b_.empty() || !contains(b_graph, b_)) throw InputError("context: b is not in B");

  // Coordinates inside B: shift the B letters of the combined basis down.
  const BasisChange coords(concat(a_, b_factor_));
  const int shift = static_cast<int>(a_.size());
  auto in_b = [&](const Word& x) {
    std::vector<Letter> raw;
    for (Letter l : coords.to_new(x)) raw.push_back(l > 0 ? l - shift : l + shift);
    return Word::reduce(raw);
  };
  const auto alphabet = Alphabet::standard(static_cast<int>(b_factor_.size()));
  if (!is_filling(in_b(w_), alphabet)) throw InputError("context: w is not filling in B");
  if (!is_primitive(in_b(b_), alphabet)) throw InputError("context: b is not primitive in B");

  const auto m = minimize_tuple(std::vector<Word>{in_b(b_)}, alphabet.rank());
  b_basis_.push_back(b_);
  for (const auto& c : m.complement) {
    std::vector<Letter> raw;
    for (Letter l : c) raw.push_back(l > 0 ? l + shift : l - shift);
    b_basis_.push_back(coords.to_old(Word::reduce(raw)));
  }
}

std::vector<Word> TwistContext::adapted_basis() const { return concat(a_, b_basis_); }

TwistContext TwistContext::standard(int rank, const Word& w, const Word& b) {
  if (rank < 2 || rank > kMaxRank) throw InputError("context rank out of range");
  std::vector<Word> bs;
  for (int i = 2; i <= rank; ++i) bs.push_back(Word{i});
  return TwistContext({Word{1}}, std::move(bs), w, b);
}

TreeVertex base_point(const RoseSplitting& s, const std::vector<Word>& a) {
  std::optional<TreeVertex> fixed;
  for (const auto& g : a) {
    if (g.empty()) continue;
    auto v = elliptic_vertex(s, g);
    if (!v) throw MathError("generator " + to_string(g) + " of A is hyperbolic");
    if (fixed && *fixed != *v) throw MathError("generators of A fix different vertices");
    fixed = v;
  }
  if (!fixed) throw MathError("A is trivial");
  return *fixed;
}

TreePath leg(const RoseSplitting& s, const TwistContext& ctx) {
  const TreeVertex e = base_point(s, ctx.a());
  if (auto f = elliptic_vertex(s, ctx.b())) return tree_path(s, e, *f);
  return tree_path(s, e, project_to_axis(s, ctx.b(), e));
}

PhiReport phi(const RoseSplitting& s, const TwistContext& ctx) {
  PhiReport r;
  r.tau = translation_length(s, ctx.w());
  if (r.tau == 0) throw MathError("w is elliptic in this splitting");
  const TreePath l = leg(s, ctx);
  r.leg_edges = static_cast<int>(l.length());

  // Window of 2m domains centred where the leg's start projects to the axis.
  const TreeVertex e = l.start;
  const TreeVertex centre = project_to_axis(s, ctx.w(), e);
  const int m = (r.leg_edges + r.tau - 1) / r.tau + 1;
  const TreeVertex lo = act(s, power(ctx.w(), -m), centre);
  const TreeVertex hi = act(s, power(ctx.w(), m), centre);
  std::set<std::pair<Word, int>> window;
  for (const auto& edge : tree_path(s, lo, hi).edges) window.insert({edge.translate, edge.loop});
  for (const auto& edge : l.edges) r.overlap_edges += window.count({edge.translate, edge.loop}) ? 1 : 0;
  r.phi = (r.overlap_edges + r.tau - 1) / r.tau;
  return r;
}

RoseSplitting collapse_loop(const RoseSplitting& s, int j) {
  const int m = static_cast<int>(s.loops().size());
  if (j < 0 || j >= m) throw InputError("loop index out of range");
  if (m == 1) throw InputError("collapsing the last loop leaves a trivial splitting");
  auto vertex = s.vertex_basis();
  vertex.push_back(s.loops()[static_cast<std::size_t>(j)]);
  std::vector<Word> loops;
  for (int i = 0; i < m; ++i)
    if (i != j) loops.push_back(s.loops()[static_cast<std::size_t>(i)]);
  return {std::move(vertex), std::move(loops)};
}

std::string to_string(const TreeVertex& v) { return to_string(v.rep); }

}  // namespace ffc
