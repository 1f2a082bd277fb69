#include "ffc/factor_complex.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "ffc/errors.hpp"
#include "ffc/sampling.hpp"

namespace ffc {

namespace {

std::vector<Word> concat(std::vector<Word> x, const std::vector<Word>& y) {
  x.insert(x.end(), y.begin(), y.end());
  return x;
}

std::vector<Word> conjugate_all(const std::vector<Word>& ws, const Word& g) {
  std::vector<Word> out;
  for (const auto& w : ws) out.push_back(conjugate(w, g));
  return out;
}

bool same_subgroup(const std::vector<Word>& x, const std::vector<Word>& y) {
  const CoreGraph gx = fold(x);
  const CoreGraph gy = fold(y);
  for (const auto& w : x)
    if (!contains(gy, w)) return false;
  for (const auto& w : y)
    if (!contains(gx, w)) return false;
  return true;
}

void check_generators(const std::vector<Word>& generators, int rank) {
  const int k = static_cast<int>(generators.size());
  if (k == 0 || k >= rank) throw NotFreeFactorError("free factor must be proper and nontrivial");
  for (const auto& g : generators)
    if (g.empty() || g.max_generator() > rank)
      throw NotFreeFactorError("generator " + to_string(g) + " is trivial or beyond rank");
  if (fold(generators).rank() != k)
    throw NotFreeFactorError("generators are not a basis of the subgroup they span");
}

}  // namespace

FactorVertex FactorVertex::with_extension(std::vector<Word> generators, std::vector<Word> extension) {
  const int n = static_cast<int>(extension.size());
  check_generators(generators, n);
  if (!spans_as_basis(extension, n)) throw NotFreeFactorError("extension is not a basis");
  std::vector<Word> prefix(extension.begin(),
                           extension.begin() + static_cast<std::ptrdiff_t>(generators.size()));
  if (!same_subgroup(generators, prefix))
    throw NotFreeFactorError("extension does not start with a basis of the subgroup");
  return {std::move(generators), std::move(extension)};
}

FactorVertex FactorVertex::certify(std::vector<Word> generators, int rank) {
  check_generators(generators, rank);
  const auto m = minimize_tuple(generators, rank);
  if (!m.free_factor) throw NotFreeFactorError("subgroup is not a free factor");
  auto extension = concat(generators, m.complement);
  if (!spans_as_basis(extension, rank)) throw MathError("complement does not extend to a basis");
  return {std::move(generators), std::move(extension)};
}

RoseSplitting FactorVertex::canonical_splitting() const {
  const auto k = static_cast<std::ptrdiff_t>(generators_.size());
  return {generators_, std::vector<Word>(extension_.begin() + k, extension_.end())};
}

bool conjugate_into(const FactorVertex& x, const FactorVertex& y) {
  return is_conjugate_into(x.generators(), y.generators());
}

bool same_vertex(const FactorVertex& x, const FactorVertex& y) {
  return x.subgroup_rank() == y.subgroup_rank() && conjugate_into(x, y) && conjugate_into(y, x);
}

bool adjacent(const FactorVertex& x, const FactorVertex& y) {
  if (x.subgroup_rank() == y.subgroup_rank()) return false;
  return x.subgroup_rank() < y.subgroup_rank() ? conjugate_into(x, y) : conjugate_into(y, x);
}

bool adjacent_link3(const FactorVertex& x, const FactorVertex& y, const FactorVertex& a) {
  if (a.ambient_rank() != 3 || x.ambient_rank() != 3 || y.ambient_rank() != 3)
    throw InputError("link adjacency is defined in rank 3");
  if (a.subgroup_rank() != 1 || x.subgroup_rank() != 2 || y.subgroup_rank() != 2)
    throw InputError("link adjacency needs rank-2 vertices around a rank-1 vertex");
  const Word& g = a.generators()[0];
  if (x.generators()[0] != g || y.generators()[0] != g)
    throw InputError("link vertices must list the generator of A first");
  return spans_as_basis(std::vector<Word>{g, x.generators()[1], y.generators()[1]}, 3);
}

int psi(const FactorVertex& x, const TwistContext& ctx) {
  if (x.ambient_rank() != ctx.rank()) throw InputError("vertex and context ranks differ");
  return phi(x.canonical_splitting(), ctx).phi;
}

CombinatorialLoop build_cN(int rank, int n, const TwistContext& ctx) {
  if (rank != ctx.rank()) throw InputError("context rank differs from requested rank");
  if (n < 1) throw InputError("N must be positive");
  const auto& a = ctx.a();
  const auto& bb = ctx.b_basis();
  const std::vector<Word> rest(bb.begin() + 1, bb.end());
  const Word big_w = power(ctx.w(), n);

  CombinatorialLoop c;
  c.vertices.push_back(FactorVertex::with_extension(concat(a, {ctx.b()}), ctx.adapted_basis()));
  c.vertices.push_back(FactorVertex::with_extension(a, ctx.adapted_basis()));
  c.vertices.push_back(FactorVertex::with_extension(concat(a, {conjugate(ctx.b(), big_w)}),
                                                    concat(a, conjugate_all(bb, big_w))));
  c.vertices.push_back(FactorVertex::with_extension({ctx.b()}, concat(concat({ctx.b()}, a), rest)));
  if (!verify_loop(c)) throw MathError("c_N failed its adjacency checks");
  return c;
}

bool verify_loop(const CombinatorialLoop& c) {
  const std::size_t m = c.length();
  if (m == 0) return false;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& x = c.vertices[i];
    const auto& y = c.vertices[(i + 1) % m];
    if (x.ambient_rank() != y.ambient_rank()) return false;
    if (!same_vertex(x, y) && !adjacent(x, y)) return false;
  }
  return true;
}

FactorSystem::FactorSystem(std::vector<FactorVertex> components, std::vector<Word> joint_basis)
    : components_(std::move(components)), joint_basis_(std::move(joint_basis)) {
  if (components_.empty()) throw NotFreeFactorError("a factor system needs a component");
  const int n = static_cast<int>(joint_basis_.size());
  if (!spans_as_basis(joint_basis_, n)) throw NotFreeFactorError("joint basis is not a basis");
  std::size_t used = 0;
  for (const auto& c : components_) {
    if (c.ambient_rank() != n) throw NotFreeFactorError("component rank differs from joint basis");
    const auto k = static_cast<std::size_t>(c.subgroup_rank());
    if (used + k > joint_basis_.size()) throw NotFreeFactorError("components exceed the joint basis");
    std::vector<Word> block(joint_basis_.begin() + static_cast<std::ptrdiff_t>(used),
                            joint_basis_.begin() + static_cast<std::ptrdiff_t>(used + k));
    if (!is_conjugate_into(block, c.generators()) || !is_conjugate_into(c.generators(), block))
      throw NotFreeFactorError("component " + std::to_string(used) + " is not spanned by its block");
    used += k;
  }
  for (std::size_t i = 0; i < components_.size(); ++i)
    for (std::size_t j = i + 1; j < components_.size(); ++j)
      if (same_vertex(components_[i], components_[j]))
        throw NotFreeFactorError("components are conjugate");
}

FactorSystem::FactorSystem(FactorVertex vertex)
    : components_{vertex}, joint_basis_(vertex.extension()) {}

bool ffs_leq(const FactorSystem& s1, const FactorSystem& s2) {
  for (const auto& x : s1.components()) {
    bool found = false;
    for (const auto& y : s2.components()) {
      if (x.subgroup_rank() <= y.subgroup_rank() && conjugate_into(x, y)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool same_system(const FactorSystem& s1, const FactorSystem& s2) {
  if (s1.components().size() != s2.components().size()) return false;
  auto covered = [](const FactorSystem& p, const FactorSystem& q) {
    for (const auto& x : p.components())
      if (std::none_of(q.components().begin(), q.components().end(),
                       [&](const FactorVertex& y) { return same_vertex(x, y); }))
        return false;
    return true;
  };
  return covered(s1, s2) && covered(s2, s1);
}

namespace {

using EdgeKey = std::pair<int, int>;
EdgeKey edge_key(int u, int v) { return u < v ? EdgeKey{u, v} : EdgeKey{v, u}; }

void check_triangulation(const TriangulatedDisc& d) {
  const int nv = d.vertex_count;
  auto fail = [](const std::string& m) { throw MalformedDiscError("malformed disc: " + m); };
  if (nv < 3) fail("fewer than three vertices");
  if (static_cast<int>(d.labels.size()) != nv) fail("label count differs from vertex count");
  if (d.triangles.empty()) fail("no triangles");
  auto in_range = [&](int v) { return v >= 0 && v < nv; };

  std::map<EdgeKey, int> edge_uses;
  std::set<std::array<int, 3>> faces;
  std::vector<bool> used(static_cast<std::size_t>(nv), false);
  for (const auto& t : d.triangles) {
    for (int v : t)
      if (!in_range(v)) fail("triangle vertex out of range");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) fail("degenerate triangle");
    auto sorted = t;
    std::sort(sorted.begin(), sorted.end());
    if (!faces.insert(sorted).second) fail("repeated triangle");
    for (int i = 0; i < 3; ++i) {
      ++edge_uses[edge_key(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>((i + 1) % 3)])];
      used[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])] = true;
    }
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) fail("vertex in no triangle");

  const std::size_t m = d.boundary.size();
  if (m < 3) fail("boundary shorter than three");
  std::set<int> boundary_vertices(d.boundary.begin(), d.boundary.end());
  if (boundary_vertices.size() != m) fail("boundary repeats a vertex");
  std::set<EdgeKey> boundary_edges;
  for (std::size_t i = 0; i < m; ++i) {
    if (!in_range(d.boundary[i])) fail("boundary vertex out of range");
    boundary_edges.insert(edge_key(d.boundary[i], d.boundary[(i + 1) % m]));
  }
  for (const auto& e : boundary_edges) {
    auto it = edge_uses.find(e);
    if (it == edge_uses.end() || it->second != 1) fail("boundary edge not in exactly one triangle");
  }
  for (const auto& [e, k] : edge_uses)
    if (!boundary_edges.count(e) && k != 2) fail("interior edge not in exactly two triangles");

  const long euler = static_cast<long>(nv) - static_cast<long>(edge_uses.size()) +
                     static_cast<long>(d.triangles.size());
  if (euler != 1) fail("Euler characteristic is not 1");

  // Vertex links: a cycle inside, a path on the boundary.
  std::vector<std::map<int, std::vector<int>>> link(static_cast<std::size_t>(nv));
  for (const auto& t : d.triangles)
    for (int i = 0; i < 3; ++i) {
      const int v = t[static_cast<std::size_t>(i)];
      const int x = t[static_cast<std::size_t>((i + 1) % 3)];
      const int y = t[static_cast<std::size_t>((i + 2) % 3)];
      link[static_cast<std::size_t>(v)][x].push_back(y);
      link[static_cast<std::size_t>(v)][y].push_back(x);
    }
  for (int v = 0; v < nv; ++v) {
    const auto& lk = link[static_cast<std::size_t>(v)];
    int ends = 0;
    for (const auto& [x, nbrs] : lk) {
      if (nbrs.size() == 1)
        ++ends;
      else if (nbrs.size() != 2)
        fail("vertex link branches");
    }
    const bool on_boundary = boundary_vertices.count(v) > 0;
    if (ends != (on_boundary ? 2 : 0)) fail("vertex link is not a disc link");
    std::set<int> seen{lk.begin()->first};
    std::vector<int> stack{lk.begin()->first};
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y : lk.at(x))
        if (seen.insert(y).second) stack.push_back(y);
    }
    if (seen.size() != lk.size()) fail("vertex link is disconnected");
  }

  // Connectivity of the whole complex.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nv));
  for (const auto& [e, k] : edge_uses) {
    adj[static_cast<std::size_t>(e.first)].push_back(e.second);
    adj[static_cast<std::size_t>(e.second)].push_back(e.first);
  }
  std::vector<bool> seen(static_cast<std::size_t>(nv), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int y : adj[static_cast<std::size_t>(x)])
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        ++count;
        stack.push_back(y);
      }
  }
  if (count != nv) fail("disc is disconnected");
}

bool leq(const FactorSystem& x, const FactorSystem& y, ComplexKind kind) {
  if (kind == ComplexKind::FreeFactors) return conjugate_into(x.components()[0], y.components()[0]);
  return ffs_leq(x, y);
}

bool is_chain(const FactorSystem& x, const FactorSystem& y, const FactorSystem& z, ComplexKind kind) {
  std::array<const FactorSystem*, 3> p{&x, &y, &z};
  std::sort(p.begin(), p.end());
  do {
    if (leq(*p[0], *p[1], kind) && leq(*p[1], *p[2], kind)) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

}  // namespace

DiscVerdict verify_disc(const TriangulatedDisc& disc, const CombinatorialLoop& c, ComplexKind kind) {
  check_triangulation(disc);
  const int n = c.vertices.empty() ? 0 : c.vertices[0].ambient_rank();
  for (std::size_t i = 0; i < disc.labels.size(); ++i) {
    const auto& label = disc.labels[i];
    if (kind == ComplexKind::FreeFactors && !label.is_single())
      return {false, "label " + std::to_string(i) + " is a factor system, not a free factor"};
    if (static_cast<int>(label.joint_basis().size()) != n)
      return {false, "label " + std::to_string(i) + " has the wrong ambient rank"};
  }
  for (std::size_t t = 0; t < disc.triangles.size(); ++t) {
    const auto& tri = disc.triangles[t];
    if (!is_chain(disc.labels[static_cast<std::size_t>(tri[0])], disc.labels[static_cast<std::size_t>(tri[1])],
                  disc.labels[static_cast<std::size_t>(tri[2])], kind))
      return {false, "triangle " + std::to_string(t) + " labels do not form a chain"};
  }

  const std::size_t m = disc.boundary.size();
  if (m != c.length()) return {false, "boundary length differs from the loop length"};
  std::vector<FactorSystem> loop;
  for (const auto& v : c.vertices) loop.emplace_back(v);
  for (std::size_t offset = 0; offset < m; ++offset)
    for (int dir : {1, -1}) {
      bool match = true;
      for (std::size_t i = 0; i < m && match; ++i) {
        const auto shift = static_cast<long>(offset) + dir * static_cast<long>(i);
        const auto pos = static_cast<std::size_t>((shift % static_cast<long>(m) + static_cast<long>(m)) %
                                                  static_cast<long>(m));
        match = same_system(disc.labels[static_cast<std::size_t>(disc.boundary[pos])], loop[i]);
      }
      if (match) return {true, {}};
    }
  return {false, "boundary labels do not match the loop"};
}

TriangulatedDisc cap_cN_in_FFn(int n, const TwistContext& ctx) {
  const auto c = build_cN(ctx.rank(), n, ctx);
  const auto& a = ctx.a();
  const auto& bb = ctx.b_basis();
  const std::vector<Word> rest(bb.begin() + 1, bb.end());
  const auto joint = ctx.adapted_basis();
  FactorSystem s({FactorVertex::with_extension(a, joint),
                  FactorVertex::with_extension({ctx.b()}, concat(concat({ctx.b()}, a), rest))},
                 joint);
  TriangulatedDisc d;
  d.vertex_count = 5;
  for (const auto& v : c.vertices) d.labels.emplace_back(v);
  d.labels.push_back(std::move(s));
  d.triangles = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  d.boundary = {0, 1, 2, 3};
  return d;
}

TriangulatedDisc fan_disc_cN(int n, const TwistContext& ctx) {
  if (ctx.b_basis().size() < 3) throw InputError("fan discs need B of rank at least 3");
  const auto c = build_cN(ctx.rank(), n, ctx);
  const auto& a = ctx.a();
  const auto& bb = ctx.b_basis();
  const auto basis = ctx.adapted_basis();
  const int b_letter = static_cast<int>(a.size()) + 1;
  const Word big_w = BasisChange(basis).to_new(power(ctx.w(), n));

  std::size_t last = big_w.size();
  for (std::size_t i = 0; i < big_w.size(); ++i)
    if (generator_of(big_w[i]) != b_letter) last = i;
  if (last == big_w.size()) throw MathError("w^N lies in <b>");

  TriangulatedDisc d;
  for (const auto& v : c.vertices) d.labels.emplace_back(v);
  d.boundary = {0, 1, 2, 3};
  auto add = [&](FactorVertex v) {
    d.labels.emplace_back(std::move(v));
    return static_cast<int>(d.labels.size()) - 1;
  };

  Word g;  // ambient word of the current prefix of W
  int x_id = 0;
  for (std::size_t i = 0; i < big_w.size(); ++i) {
    const Letter l = big_w[i];
    const Word step = substitute(Word{l}, basis);
    if (generator_of(l) == b_letter) {
      g *= step;
      continue;
    }
    // Z = <A, g b g^-1, g l g^-1> contains the current and the next X.
    const auto conj_bb = conjugate_all(bb, g);
    std::vector<Word> z_ext = a;
    z_ext.push_back(conj_bb[0]);
    const auto li = static_cast<std::size_t>(generator_of(l) - b_letter);
    z_ext.push_back(conj_bb[li]);
    for (std::size_t j = 1; j < conj_bb.size(); ++j)
      if (j != li) z_ext.push_back(conj_bb[j]);
    std::vector<Word> z_gens(z_ext.begin(), z_ext.begin() + static_cast<std::ptrdiff_t>(a.size() + 2));
    const int z_id = add(FactorVertex::with_extension(std::move(z_gens), std::move(z_ext)));

    g *= step;
    int next_id = 2;
    if (i != last) {
      const auto next_bb = conjugate_all(bb, g);
      next_id = add(FactorVertex::with_extension(concat(a, {next_bb[0]}), concat(a, next_bb)));
    }
    for (int cone : {1, 3}) {
      d.triangles.push_back({cone, x_id, z_id});
      d.triangles.push_back({cone, z_id, next_id});
    }
    x_id = next_id;
  }
  d.vertex_count = static_cast<int>(d.labels.size());
  return d;
}

LinkPair sample_link_pair(const TwistContext& ctx, std::uint64_t seed, std::uint64_t index) {
  if (ctx.a().size() != 1) throw InputError("link sampling needs A of rank one");
  const int n = ctx.rank();
  const auto basis = ctx.adapted_basis();
  auto rng = sample_engine(seed, index);
  const auto phi_moves = random_automorphism_fixing_a(n, 6, rng);
  std::vector<Word> image;
  for (int i = 1; i <= n; ++i) image.push_back(substitute(apply_all(phi_moves, Word{i}), basis));
  FactorVertex x = FactorVertex::with_extension({image[0], image[1]}, image);
  if (n >= 4) return {x, FactorVertex::with_extension({image[0], image[1], image[2]}, image)};
  return {x, FactorVertex::with_extension({image[0], image[2]}, {image[0], image[2], image[1]})};
}

BoundCertificate lower_bound_certificate(int n, const TwistContext& ctx, int samples, std::uint64_t seed) {
  if (n < 1) throw InputError("N must be positive");
  if (samples < 1) throw InputError("need at least one sample");
  const auto c = build_cN(ctx.rank(), n, ctx);
  BoundCertificate cert;
  cert.n = n;
  cert.samples = samples;
  cert.seed = seed;
  cert.psi_a0 = psi(c.vertices[0], ctx);
  cert.psi_an = psi(c.vertices[2], ctx);
  for (int i = 0; i < samples; ++i) {
    const auto pair = sample_link_pair(ctx, seed, static_cast<std::uint64_t>(i));
    try {
      const int jump = std::abs(psi(pair.x, ctx) - psi(pair.y, ctx));
      cert.max_observed_jump = std::max(cert.max_observed_jump, jump);
      ++cert.valid_samples;
    } catch (const MathError&) {
    }
  }
  if (cert.valid_samples == 0) throw MathError("no sampled link edge produced a valid pair");
  cert.empirical_lipschitz = std::max(1, cert.max_observed_jump);
  const int gap = std::abs(cert.psi_an - cert.psi_a0);
  cert.min_path_length = (gap + cert.empirical_lipschitz - 1) / cert.empirical_lipschitz;
  cert.min_triangles = (cert.min_path_length + 2) / 3;
  return cert;
}

}  // namespace ffc
