#pragma once

// Stallings core graphs of finitely generated subgroups, Nielsen reduction
// and the change-of-basis machinery built on it.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ffc/whitehead.hpp"
#include "ffc/words.hpp"

namespace ffc {

class CoreGraph {
 public:
  struct Edge {
    int from = 0;
    int to = 0;
    int label = 0;  // positive generator index
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  CoreGraph() = default;
  // Validates foldedness; used when loading graphs from files.
  static CoreGraph from_edges(int vertex_count, std::vector<Edge> edges,
                              std::optional<int> basepoint);

  int vertex_count() const { return static_cast<int>(adj_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<int> basepoint() const { return basepoint_; }
  std::optional<int> follow(int v, Letter x) const;
  // Signed label -> endpoint for every edge end at v.
  const std::map<Letter, int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
  // Rank of the fundamental group (graph assumed connected).
  int rank() const { return static_cast<int>(edges_.size()) - vertex_count() + 1; }
  // Reads a shortest edge path from u to v.
  std::optional<Word> path_word(int u, int v) const;
  // One vertex carrying `rank` loops with distinct labels.
  bool is_rose(int rank) const;

  struct CyclicCore;
  // Basepoint-free core. The returned graph's basepoint marks the vertex
  // where the hair from the original basepoint lands.
  CyclicCore cyclic_core() const;

 private:
  friend class GraphFolder;
  std::vector<Edge> edges_;
  std::vector<std::map<Letter, int>> adj_;
  std::optional<int> basepoint_;
};

struct CoreGraph::CyclicCore {
  CoreGraph core;
  Word hair;  // subgroup == hair * loops(core at its basepoint) * hair^-1
};

CoreGraph fold(std::span<const Word> generators);
bool contains(const CoreGraph& subgroup, const Word& w);

// Some g with <h> <= g <x> g^-1, if one exists.
std::optional<Word> conjugator_into(std::span<const Word> h, std::span<const Word> x);
bool is_conjugate_into(std::span<const Word> h, std::span<const Word> x);

struct NielsenMove {
  enum class Kind { Swap, Invert, RightMultiply, LeftMultiply };
  Kind kind = Kind::Swap;
  int i = 0;
  int j = 0;
  int sign = 1;  // exponent of the multiplier entry

  friend bool operator==(const NielsenMove&, const NielsenMove&) = default;
};
using NielsenTranscript = std::vector<NielsenMove>;

void apply_move(std::vector<Word>& tuple, const NielsenMove& m);
NielsenMove inverse_move(const NielsenMove& m);

struct BasisCheck {
  bool is_basis = false;
  // When is_basis: carries the tuple to (a1, ..., an) exactly.
  NielsenTranscript transcript;
};

// Throws InputError when the tuple length differs from the rank.
BasisCheck is_basis(std::span<const Word> tuple, int rank);
// Same decision without computing a transcript.
bool spans_as_basis(std::span<const Word> tuple, int rank);

// Coordinates with respect to a fixed basis of the free group. New letter i
// stands for basis[i-1].
class BasisChange {
 public:
  // Throws MathError if `basis` is not a basis of the rank-|basis| group.
  explicit BasisChange(std::vector<Word> basis);

  int rank() const { return static_cast<int>(basis_.size()); }
  const std::vector<Word>& basis() const { return basis_; }
  const NielsenTranscript& transcript() const { return transcript_; }
  Word to_new(const Word& w) const;
  Word to_old(const Word& v) const;

 private:
  std::vector<Word> basis_;
  std::vector<Word> standard_in_new_;
  NielsenTranscript transcript_;
};

Word rewrite_in_basis(const Word& w, std::span<const Word> basis);

struct TupleMinimization {
  // Standard letters spanning the minimized subgroup when it is a free
  // factor; otherwise the cyclically reduced images of the tuple.
  std::vector<Word> minimal;
  AutomorphismTranscript transcript;
  int core_edges = 0;
  bool free_factor = false;
  // Complementary free factor basis, pulled back to original coordinates.
  std::vector<Word> complement;
};

// Whitehead minimization of the number of edges in the cyclic core of
// <tuple>. The subgroup is a free factor iff the minimum is a rose on
// distinct standard letters.
TupleMinimization minimize_tuple(std::span<const Word> tuple, int rank);

}  // namespace ffc
