#pragma once

// Free factor vertices, adjacency up to conjugation, the twist map psi,
// the loops c_N with their capping discs, free factor systems and the
// lower-bound certificate for discs filling c_N.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffc/splittings.hpp"
#include "ffc/stallings.hpp"
#include "ffc/words.hpp"

namespace ffc {

// Conjugacy class of a proper nontrivial free factor, given by a basis of a
// representative.
class FactorVertex {
 public:
  // `extension` is a basis of the free group whose first |generators|
  // entries span the same subgroup. Throws NotFreeFactorError otherwise.
  static FactorVertex with_extension(std::vector<Word> generators, std::vector<Word> extension);
  // Certifies through tuple minimization; the complement found becomes the
  // extension. Throws NotFreeFactorError if the subgroup is not a proper
  // nontrivial free factor.
  static FactorVertex certify(std::vector<Word> generators, int rank);

  const std::vector<Word>& generators() const { return generators_; }
  const std::vector<Word>& extension() const { return extension_; }
  int ambient_rank() const { return static_cast<int>(extension_.size()); }
  int subgroup_rank() const { return static_cast<int>(generators_.size()); }
  // The rose splitting with this vertex group and the remaining extension
  // letters as loops.
  RoseSplitting canonical_splitting() const;

 private:
  FactorVertex(std::vector<Word> g, std::vector<Word> e)
      : generators_(std::move(g)), extension_(std::move(e)) {}
  std::vector<Word> generators_;
  std::vector<Word> extension_;
};

// Up to conjugation.
bool conjugate_into(const FactorVertex& x, const FactorVertex& y);
bool same_vertex(const FactorVertex& x, const FactorVertex& y);
bool adjacent(const FactorVertex& x, const FactorVertex& y);
// Rank 3 link of A = [<a>]: X = [<a,x>] and Y = [<a,y>] are joined when
// (a, x, y) is a basis. Throws InputError for other shapes.
bool adjacent_link3(const FactorVertex& x, const FactorVertex& y, const FactorVertex& a);

int psi(const FactorVertex& x, const TwistContext& ctx);

struct CombinatorialLoop {
  std::vector<FactorVertex> vertices;
  std::size_t length() const { return vertices.size(); }
};

// The vertices of c_N in order: [<A,b>], [<A>], [<A, W b W^-1>], [<b>]
// with W = w^N.
CombinatorialLoop build_cN(int rank, int n, const TwistContext& ctx);
bool verify_loop(const CombinatorialLoop& c);

// Components of a free factorization A_1 * ... * A_k * F_M of the free group.
class FactorSystem {
 public:
  // `joint_basis` must be a basis whose consecutive blocks, of sizes equal
  // to the component ranks, span conjugates of the components.
  FactorSystem(std::vector<FactorVertex> components, std::vector<Word> joint_basis);
  // A single free factor.
  explicit FactorSystem(FactorVertex vertex);

  const std::vector<FactorVertex>& components() const { return components_; }
  const std::vector<Word>& joint_basis() const { return joint_basis_; }
  bool is_single() const { return components_.size() == 1; }

 private:
  std::vector<FactorVertex> components_;
  std::vector<Word> joint_basis_;
};

bool ffs_leq(const FactorSystem& s1, const FactorSystem& s2);
bool same_system(const FactorSystem& s1, const FactorSystem& s2);

struct TriangulatedDisc {
  int vertex_count = 0;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary;  // cycle of vertex ids, counterclockwise
  std::vector<FactorSystem> labels;
};

enum class ComplexKind {
  FreeFactors,        // labels are single factors, faces are inclusion chains
  FreeFactorSystems,  // faces are chains under the system order
};

struct DiscVerdict {
  bool ok = false;
  std::string reason;  // empty when ok
};

// Throws MalformedDiscError when the triangulation is not a disc or labels
// are missing; returns a failed verdict for labeling problems.
DiscVerdict verify_disc(const TriangulatedDisc& disc, const CombinatorialLoop& c, ComplexKind kind);

// Four triangles coned off at {[<A>], [<b>]}.
TriangulatedDisc cap_cN_in_FFn(int n, const TwistContext& ctx);
// A disc for c_N among free factors only (rank >= 4): c_N's two diagonals
// are joined by inclusion chains walking W one letter at a time, coned from
// [<A>] and from [<b>].
TriangulatedDisc fan_disc_cN(int n, const TwistContext& ctx);

struct BoundCertificate {
  int n = 0;
  int psi_a0 = 0;
  int psi_an = 0;
  int empirical_lipschitz = 0;
  int max_observed_jump = 0;
  int min_path_length = 0;
  int min_triangles = 0;
  int samples = 0;
  int valid_samples = 0;
  std::uint64_t seed = 0;
};

struct LinkPair {
  FactorVertex x;
  FactorVertex y;
};

// Sample i: an automorphism fixing a applied to the canonical link edge
// ([<a,b>] < [<a,b,c>] in rank >= 4, [<a,b>] - [<a,c>] in rank 3).
LinkPair sample_link_pair(const TwistContext& ctx, std::uint64_t seed, std::uint64_t index);

BoundCertificate lower_bound_certificate(int n, const TwistContext& ctx, int samples, std::uint64_t seed);

}  // namespace ffc
