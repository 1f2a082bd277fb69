#pragma once

// Bass-Serre trees of one-vertex free splittings ("roses"): the vertex group
// is spanned by part of a basis and the remaining basis elements are stable
// letters. Tree vertices are cosets of the vertex group; all computations are
// done on words in the combined basis.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ffc/stallings.hpp"
#include "ffc/words.hpp"

namespace ffc {

class RoseSplitting {
 public:
  // Throws InputError without loops, MathError if vertex_basis ++ loops is
  // not a basis of the free group.
  RoseSplitting(std::vector<Word> vertex_basis, std::vector<Word> loops);

  const std::vector<Word>& vertex_basis() const { return vertex_basis_; }
  const std::vector<Word>& loops() const { return loops_; }
  int rank() const { return coords_->rank(); }
  int vertex_rank() const { return static_cast<int>(vertex_basis_.size()); }
  // New letter i stands for (vertex_basis ++ loops)[i-1].
  const BasisChange& coordinates() const { return *coords_; }
  bool is_loop_letter(Letter x) const { return generator_of(x) > vertex_rank(); }
  // 0-based loop index of a loop letter.
  int loop_index(Letter x) const { return generator_of(x) - vertex_rank() - 1; }

 private:
  std::vector<Word> vertex_basis_;
  std::vector<Word> loops_;
  std::shared_ptr<const BasisChange> coords_;
};

// A coset g<vertex group>, named by g in new letters with trailing vertex
// letters removed.
struct TreeVertex {
  Word rep;
  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
  friend auto operator<=>(const TreeVertex&, const TreeVertex&) = default;
};

// The edge translate * e_loop, where e_loop joins the base vertex to
// loop_letter * base. sign = +1 walks it in that direction.
struct TreeEdge {
  Word translate;
  int loop = 0;
  int sign = 1;

  TreeVertex source(const RoseSplitting& s) const;
  TreeVertex target(const RoseSplitting& s) const;
  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

struct TreePath {
  TreeVertex start;
  std::vector<TreeEdge> edges;

  std::size_t length() const { return edges.size(); }
  std::vector<TreeVertex> vertices(const RoseSplitting& s) const;
};

TreeVertex canonical_vertex(const RoseSplitting& s, const Word& element_new);
// g (ambient word) acting on a vertex.
TreeVertex act(const RoseSplitting& s, const Word& g, const TreeVertex& v);
TreePath tree_path(const RoseSplitting& s, const TreeVertex& from, const TreeVertex& to);
int tree_distance(const RoseSplitting& s, const TreeVertex& from, const TreeVertex& to);

int translation_length(const RoseSplitting& s, const Word& g);
// Throws InputError for the trivial element.
std::optional<TreeVertex> elliptic_vertex(const RoseSplitting& s, const Word& g);
// A vertex on the axis of a hyperbolic g. Throws MathError if g is elliptic.
TreeVertex axis_point(const RoseSplitting& s, const Word& g);
bool on_axis(const RoseSplitting& s, const Word& g, const TreeVertex& v);
// Nearest point of g's axis to v.
TreeVertex project_to_axis(const RoseSplitting& s, const Word& g, const TreeVertex& v);
// Geodesic from axis_point(g) to g^k of it; length k * tau(g).
TreePath axis_window(const RoseSplitting& s, const Word& g, int k);

// Free group A * B with the twisting data: w filling and b primitive in B.
class TwistContext {
 public:
  // Throws InputError naming the first failing requirement.
  TwistContext(std::vector<Word> a, std::vector<Word> b_factor, Word w, Word b);
  // A = <a>, B = <b, c, ...> in the given rank.
  static TwistContext standard(int rank, const Word& w, const Word& b);

  const std::vector<Word>& a() const { return a_; }
  const std::vector<Word>& b_factor() const { return b_factor_; }
  const Word& w() const { return w_; }
  const Word& b() const { return b_; }
  int rank() const { return static_cast<int>(a_.size() + b_factor_.size()); }
  // A basis of B whose first entry is b, as ambient words.
  const std::vector<Word>& b_basis() const { return b_basis_; }
  // A ++ b_basis(), a basis of the free group.
  std::vector<Word> adapted_basis() const;

 private:
  std::vector<Word> a_;
  std::vector<Word> b_factor_;
  Word w_;
  Word b_;
  std::vector<Word> b_basis_;
};

// The vertex fixed by every element of `a`. Throws MathError otherwise.
TreeVertex base_point(const RoseSplitting& s, const std::vector<Word>& a);
TreePath leg(const RoseSplitting& s, const TwistContext& ctx);

struct PhiReport {
  int phi = 0;
  int tau = 0;
  int overlap_edges = 0;
  int leg_edges = 0;
};

// Number of fundamental domains of w's axis crossed by the leg of b.
// Throws MathError if w is elliptic.
PhiReport phi(const RoseSplitting& s, const TwistContext& ctx);

// Moves loop j (0-based) into the vertex group. Throws InputError on the
// last loop.
RoseSplitting collapse_loop(const RoseSplitting& s, int j);

std::string to_string(const TreeVertex& v);

}  // namespace ffc
