#pragma once

// Whitehead automorphisms, cyclic length minimization, and the primitivity
// and filling predicates built on them.

#include <cstdint>
#include <utility>
#include <vector>

#include "ffc/words.hpp"

namespace ffc {

class WhiteheadAutomorphism {
 public:
  enum class Kind { Permutation, Multiplier };

  // Type I: generator i maps to images[i-1], a signed permutation.
  static WhiteheadAutomorphism permutation(int rank, std::vector<Letter> images);
  // Type II: x maps into {x, xa, a^-1 x, a^-1 x a} by membership of x and
  // x^-1 in `subset`. Requires a in subset and a^-1 not in subset.
  static WhiteheadAutomorphism multiplier(int rank, Letter a, const std::vector<Letter>& subset);
  static WhiteheadAutomorphism multiplier_mask(int rank, Letter a, std::uint64_t subset);

  Kind kind() const { return kind_; }
  int rank() const { return rank_; }
  Letter multiplier_letter() const { return multiplier_; }
  std::uint64_t subset_mask() const { return subset_; }
  std::vector<Letter> subset() const;
  const std::vector<Letter>& images() const { return images_; }

  Word image(Letter x) const;
  Word apply(const Word& w) const;
  WhiteheadAutomorphism inverse() const;

  friend bool operator==(const WhiteheadAutomorphism&, const WhiteheadAutomorphism&) = default;

  // Bit position of a signed letter inside a subset mask.
  static int bit(Letter x) { return 2 * (generator_of(x) - 1) + (x < 0 ? 1 : 0); }
  static Letter letter_of_bit(int b) { return b % 2 == 0 ? b / 2 + 1 : -(b / 2 + 1); }

 private:
  Kind kind_ = Kind::Permutation;
  int rank_ = 0;
  std::vector<Letter> images_;
  Letter multiplier_ = 0;
  std::uint64_t subset_ = 0;
};

using AutomorphismTranscript = std::vector<WhiteheadAutomorphism>;

Word apply_all(const AutomorphismTranscript& t, const Word& w);
Word apply_inverse_all(const AutomorphismTranscript& t, const Word& w);

// Calls f on every type-II automorphism of the given rank in
// (multiplier, subset) lexicographic order until f returns true.
template <class F>
bool for_each_multiplier_automorphism(int rank, F&& f);

// Signed letters in the scan order used for multipliers: a, A, b, B, ...
std::vector<Letter> ordered_letters(int rank);

struct Minimization {
  CyclicWord minimal;
  AutomorphismTranscript transcript;
};

// Cyclic length minimization by repeatedly applying the first shortening
// type-II automorphism. The word must lie in the standard alphabet of
// `rank`.
Minimization minimize(const CyclicWord& w, int rank);

struct WhiteheadGraph {
  int rank = 0;
  // Vertices are bit indices 0..2n-1 (see WhiteheadAutomorphism::bit).
  std::vector<std::pair<int, int>> edges;

  bool connected() const;
  bool has_cut_vertex() const;
};

WhiteheadGraph whitehead_graph(const CyclicWord& w, int rank);

bool is_primitive(const Word& w, const Alphabet& alphabet);
bool is_filling(const Word& w, const Alphabet& alphabet);
inline bool is_primitive(const Word& w, int rank) { return is_primitive(w, Alphabet::fitting(rank, w)); }
inline bool is_filling(const Word& w, int rank) { return is_filling(w, Alphabet::fitting(rank, w)); }

template <class F>
bool for_each_multiplier_automorphism(int rank, F&& f) {
  const int bits = 2 * rank;
  for (Letter a : ordered_letters(rank)) {
    const int ba = WhiteheadAutomorphism::bit(a);
    const int bai = WhiteheadAutomorphism::bit(-a);
    std::vector<int> free_bits;
    for (int b = 0; b < bits; ++b)
      if (b != ba && b != bai) free_bits.push_back(b);
    const std::uint64_t count = std::uint64_t{1} << free_bits.size();
    for (std::uint64_t s = 0; s < count; ++s) {
      std::uint64_t mask = std::uint64_t{1} << ba;
      for (std::size_t i = 0; i < free_bits.size(); ++i)
        if (s >> i & 1U) mask |= std::uint64_t{1} << free_bits[i];
      if (f(WhiteheadAutomorphism::multiplier_mask(rank, a, mask))) return true;
    }
  }
  return false;
}

}  // namespace ffc
