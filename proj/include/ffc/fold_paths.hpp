#pragma once

// Marked graphs, the free factors carried by their subgraphs, elementary
// Stallings fold sequences between roses, and a tracker for the loop of a
// word through such a sequence.

#include <optional>
#include <vector>

#include "ffc/factor_complex.hpp"
#include "ffc/stallings.hpp"
#include "ffc/words.hpp"

namespace ffc {

struct MarkedEdge {
  int from = 0;
  int to = 0;
  Word label;  // image of the edge in the free group
};

// One pass along an edge: dir = +1 from `from` to `to`.
struct Traversal {
  int edge = 0;
  int dir = 1;
  friend bool operator==(const Traversal&, const Traversal&) = default;
};

// An end of an edge: start = true for the `from` end.
struct Direction {
  int edge = 0;
  bool start = true;
  friend bool operator==(const Direction&, const Direction&) = default;
  friend auto operator<=>(const Direction&, const Direction&) = default;
};

class MarkedGraph {
 public:
  // Throws InputError unless the graph is connected and its loop markings
  // (relative to a breadth-first spanning tree from `base`) are a basis of
  // the free group of the graph's rank. `h_edges` spans the distinguished
  // subgraph, which must be connected when present.
  MarkedGraph(int vertex_count, std::vector<MarkedEdge> edges, int base, std::vector<int> h_edges);
  // One vertex with petal i marked by marking[i]; the first h_petals petals
  // span the distinguished subgraph.
  static MarkedGraph rose(std::vector<Word> marking, int h_petals);

  int vertex_count() const { return vertex_count_; }
  const std::vector<MarkedEdge>& edges() const { return edges_; }
  int base() const { return base_; }
  const std::vector<int>& h_edges() const { return h_edges_; }
  int rank() const { return static_cast<int>(edges_.size()) - vertex_count_ + 1; }
  bool is_rose() const { return vertex_count_ == 1; }
  int degree(int v) const;

  // Markings of the loops through the non-tree edges, in edge order.
  std::vector<Word> loop_basis() const;
  // Edge path of the loop through non-tree edge e, based at base().
  std::vector<Traversal> loop_path(int e) const;
  std::vector<int> non_tree_edges() const;

 private:
  void build_tree();

  int vertex_count_ = 0;
  std::vector<MarkedEdge> edges_;
  int base_ = 0;
  std::vector<int> h_edges_;
  // Spanning tree: parent traversal into each vertex (edge -1 at base).
  std::vector<Traversal> parent_;
  std::vector<bool> in_tree_;
};

// Prunes valence-one vertices and smooths valence-two vertices, keeping the
// base vertex and every edge of the distinguished subgraph.
MarkedGraph normalize(const MarkedGraph& g);

// The free factor carried by a connected subgraph, certified by extending a
// spanning tree of the subgraph to the whole graph.
FactorVertex subgraph_factor(const MarkedGraph& g, const std::vector<int>& edges);

struct PiElement {
  FactorVertex vertex;
  std::vector<int> edges;  // edge ids of normalize(g)
};

// Distinct factors of connected subgraphs containing the distinguished
// subgraph with rank strictly between its rank and the graph's.
std::vector<PiElement> pi_of(const MarkedGraph& g);

// Path of at most five vertices between two members of pi_of(g), passing
// through a codimension-one subgraph on each side and a subgraph of rank
// one more than the distinguished one. Throws MathError when the
// distinguished subgraph has corank below 3.
std::vector<FactorVertex> pi_diameter_path(const MarkedGraph& g, const FactorVertex& p,
                                           const FactorVertex& q);

struct FoldStep {
  int vertex = 0;
  Direction first;
  Direction second;
};

struct FoldStage {
  // Petal swaps and inversions applied to the previous rose first.
  std::vector<NielsenMove> relabel_before;
  MarkedGraph subdivided;
  FoldStep fold;
  MarkedGraph folded;
  NielsenMove move;
  bool touches_h = false;
};

struct FoldSequence {
  MarkedGraph start;
  std::vector<FoldStage> stages;
  std::vector<NielsenMove> relabel_after;
  MarkedGraph finish;  // rose marked by the target basis
};

// Folds a rose onto the rose marked by `target_basis`, one Nielsen
// multiplication per stage; swaps and inversions only relabel petals.
FoldSequence fold_sequence(const MarkedGraph& rose, const std::vector<Word>& target_basis);

// A path in the complex of free factors containing A, from X to Y.
std::vector<FactorVertex> upward_path(const FactorVertex& x, const FactorVertex& y,
                                      const FactorVertex& a);

struct WCoreState {
  std::vector<Traversal> path;  // cyclic, tightened
  bool has_illegal_turn = false;
  int core_length = 0;
  int max_legal_run = 0;
  int edge_count = 0;
  int phase = 0;
};

// Tightened cyclic edge path of w in g.
std::vector<Traversal> cyclic_edge_path(const MarkedGraph& g, const Word& w);

enum class GateRule {
  NextFold,  // a turn is illegal when the stage's own fold identifies it
  Residual,  // ... when the composite of all remaining folds identifies it
};

// One state per stage and one for the final rose.
std::vector<WCoreState> w_core_diagnostic(const FoldSequence& seq, const Word& w,
                                          GateRule rule = GateRule::NextFold);

// True when the states with an illegal turn are exactly the first k states.
bool illegal_turns_form_prefix(const std::vector<WCoreState>& states);

}  // namespace ffc
