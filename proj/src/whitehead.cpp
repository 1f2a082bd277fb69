#include "ffc/whitehead.hpp"

#include <algorithm>
#include <functional>

#include "ffc/errors.hpp"

namespace ffc {

namespace {

bool in_mask(std::uint64_t mask, Letter x) {
  return (mask >> WhiteheadAutomorphism::bit(x)) & 1U;
}

void check_rank(int rank) {
  if (rank < 1 || rank > kMaxRank) throw InputError("rank must lie in 1..26");
}

}  // namespace

WhiteheadAutomorphism WhiteheadAutomorphism::permutation(int rank, std::vector<Letter> images) {
  check_rank(rank);
  if (static_cast<int>(images.size()) != rank)
    throw InputError("permutation needs one image per generator");
  std::vector<bool> seen(static_cast<std::size_t>(rank) + 1, false);
  for (Letter x : images) {
    int g = generator_of(x);
    if (g < 1 || g > rank || seen[static_cast<std::size_t>(g)])
      throw InputError("permutation images must be a signed permutation");
    seen[static_cast<std::size_t>(g)] = true;
  }
  WhiteheadAutomorphism out;
  out.kind_ = Kind::Permutation;
  out.rank_ = rank;
  out.images_ = std::move(images);
  return out;
}

WhiteheadAutomorphism WhiteheadAutomorphism::multiplier(int rank, Letter a,
                                                        const std::vector<Letter>& subset) {
  check_rank(rank);
  std::uint64_t mask = 0;
  for (Letter x : subset) {
    if (x == 0 || generator_of(x) > rank) throw InputError("subset letter outside rank");
    mask |= std::uint64_t{1} << bit(x);
  }
  return multiplier_mask(rank, a, mask);
}

WhiteheadAutomorphism WhiteheadAutomorphism::multiplier_mask(int rank, Letter a,
                                                             std::uint64_t subset) {
  check_rank(rank);
  if (a == 0 || generator_of(a) > rank) throw InputError("multiplier outside rank");
  if (!in_mask(subset, a)) throw InputError("multiplier must belong to the subset");
  if (in_mask(subset, -a)) throw InputError("inverse of the multiplier must not belong to the subset");
  WhiteheadAutomorphism out;
  out.kind_ = Kind::Multiplier;
  out.rank_ = rank;
  out.multiplier_ = a;
  out.subset_ = subset;
  return out;
}

std::vector<Letter> WhiteheadAutomorphism::subset() const {
  std::vector<Letter> out;
  for (int b = 0; b < 2 * rank_; ++b)
    if ((subset_ >> b) & 1U) out.push_back(letter_of_bit(b));
  return out;
}

Word WhiteheadAutomorphism::image(Letter x) const {
  if (generator_of(x) > rank_) throw InputError("letter outside automorphism rank");
  if (x < 0) return image(-x).inverse();
  if (kind_ == Kind::Permutation) return Word{images_[static_cast<std::size_t>(x - 1)]};
  if (generator_of(x) == generator_of(multiplier_)) return Word{x};
  std::vector<Letter> raw;
  if (in_mask(subset_, -x)) raw.push_back(-multiplier_);
  raw.push_back(x);
  if (in_mask(subset_, x)) raw.push_back(multiplier_);
  return Word::reduce(raw);
}

Word WhiteheadAutomorphism::apply(const Word& w) const {
  std::vector<Letter> raw;
  raw.reserve(w.size() * 3);
  for (Letter x : w) {
    Word img = image(x);
    raw.insert(raw.end(), img.begin(), img.end());
  }
  return Word::reduce(raw);
}

WhiteheadAutomorphism WhiteheadAutomorphism::inverse() const {
  if (kind_ == Kind::Permutation) {
    std::vector<Letter> inv_images(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) {
      Letter y = images_[i];
      Letter x = static_cast<Letter>(i + 1);
      inv_images[static_cast<std::size_t>(generator_of(y) - 1)] = y > 0 ? x : -x;
    }
    return permutation(rank_, std::move(inv_images));
  }
  std::uint64_t mask = subset_;
  mask &= ~(std::uint64_t{1} << bit(multiplier_));
  mask |= std::uint64_t{1} << bit(-multiplier_);
  return multiplier_mask(rank_, -multiplier_, mask);
}

Word apply_all(const AutomorphismTranscript& t, const Word& w) {
  Word out = w;
  for (const auto& a : t) out = a.apply(out);
  return out;
}

Word apply_inverse_all(const AutomorphismTranscript& t, const Word& w) {
  Word out = w;
  for (auto it = t.rbegin(); it != t.rend(); ++it) out = it->inverse().apply(out);
  return out;
}

std::vector<Letter> ordered_letters(int rank) {
  std::vector<Letter> out;
  for (int i = 1; i <= rank; ++i) {
    out.push_back(i);
    out.push_back(-i);
  }
  return out;
}

Minimization minimize(const CyclicWord& w, int rank) {
  if (w.representative().max_generator() > rank)
    throw InputError("word " + to_string(w) + " is beyond rank " + std::to_string(rank));
  Minimization out{w, {}};
  bool improved = true;
  while (improved && out.minimal.size() > 1) {
    improved = false;
    const std::size_t current = out.minimal.size();
    for_each_multiplier_automorphism(rank, [&](const WhiteheadAutomorphism& aut) {
      CyclicWord image = cyclic_reduce(aut.apply(out.minimal.representative())).core;
      if (image.size() < current) {
        out.minimal = std::move(image);
        out.transcript.push_back(aut);
        improved = true;
        return true;
      }
      return false;
    });
  }
  return out;
}

WhiteheadGraph whitehead_graph(const CyclicWord& w, int rank) {
  if (w.empty()) throw MathError("Whitehead graph of the empty word");
  if (w.representative().max_generator() > rank)
    throw InputError("word " + to_string(w) + " is beyond rank " + std::to_string(rank));
  WhiteheadGraph g;
  g.rank = rank;
  const auto& s = w.representative().letters();
  for (std::size_t i = 0; i < s.size(); ++i) {
    Letter x = s[i], y = s[(i + 1) % s.size()];
    int u = WhiteheadAutomorphism::bit(-x), v = WhiteheadAutomorphism::bit(y);
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  return g;
}

bool WhiteheadGraph::connected() const {
  const int n = 2 * rank;
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  std::function<int(int)> find = [&](int x) {
    auto& p = parent[static_cast<std::size_t>(x)];
    return p == x ? x : p = find(p);
  };
  int components = n;
  for (auto [u, v] : edges) {
    int a = find(u), b = find(v);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return components == 1;
}

bool WhiteheadGraph::has_cut_vertex() const {
  const int n = 2 * rank;
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    adj[static_cast<std::size_t>(u)].emplace_back(v, static_cast<int>(e));
    adj[static_cast<std::size_t>(v)].emplace_back(u, static_cast<int>(e));
  }
  std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  int timer = 0;
  bool found = false;
  std::function<void(int, int)> dfs = [&](int u, int parent_edge) {
    auto su = static_cast<std::size_t>(u);
    disc[su] = low[su] = timer++;
    int children = 0;
    for (auto [v, e] : adj[su]) {
      if (e == parent_edge) continue;
      auto sv = static_cast<std::size_t>(v);
      if (disc[sv] == -1) {
        ++children;
        dfs(v, e);
        low[su] = std::min(low[su], low[sv]);
        if (parent_edge != -1 && low[sv] >= disc[su]) found = true;
      } else {
        low[su] = std::min(low[su], disc[sv]);
      }
    }
    if (parent_edge == -1 && children > 1) found = true;
  };
  for (int u = 0; u < n; ++u)
    if (disc[static_cast<std::size_t>(u)] == -1) dfs(u, -1);
  return found;
}

namespace {

CyclicWord compressed_core(const Word& w, const Alphabet& alphabet) {
  if (w.empty()) throw InputError("predicate requires a nonempty word");
  return cyclic_reduce(alphabet.compress(w)).core;
}

}  // namespace

bool is_primitive(const Word& w, const Alphabet& alphabet) {
  CyclicWord core = compressed_core(w, alphabet);
  return minimize(core, alphabet.rank()).minimal.size() == 1;
}

bool is_filling(const Word& w, const Alphabet& alphabet) {
  CyclicWord core = compressed_core(w, alphabet);
  CyclicWord minimal = minimize(core, alphabet.rank()).minimal;
  WhiteheadGraph g = whitehead_graph(minimal, alphabet.rank());
  return g.connected() && !g.has_cut_vertex();
}

}  // namespace ffc
