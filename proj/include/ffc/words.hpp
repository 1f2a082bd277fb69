#pragma once

// Freely and cyclically reduced words in a free group of finite rank.
//
// A letter is a nonzero int: +i is the i-th generator (1-based), -i its
// inverse. Words are always kept freely reduced; the empty word is the
// identity.

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ffc {

using Letter = int;

constexpr Letter inv(Letter x) { return -x; }
constexpr int generator_of(Letter x) { return x < 0 ? -x : x; }

// Largest rank the ASCII codec can express.
inline constexpr int kMaxRank = 26;

class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters);

  // Freely reduces an arbitrary letter sequence.
  static Word reduce(std::span<const Letter> raw);
  // Same, but rejects letters whose generator index exceeds `rank`.
  static Word reduce(std::span<const Letter> raw, int rank);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  Word inverse() const;
  // Subwords of reduced words are reduced, so no reduction happens here.
  Word slice(std::size_t pos, std::size_t len) const;
  int max_generator() const;
  // Number of letters (either sign) whose generator satisfies `pred`.
  template <class Pred>
  std::size_t count_if_generator(Pred pred) const {
    std::size_t n = 0;
    for (Letter x : letters_) n += pred(generator_of(x)) ? 1 : 0;
    return n;
  }

  friend Word operator*(const Word& u, const Word& v);
  Word& operator*=(const Word& v);

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& u, const Word& v) {
    if (u.size() != v.size()) return u.size() <=> v.size();
    return u.letters_ <=> v.letters_;
  }

 private:
  std::vector<Letter> letters_;
};

Word letter_word(Letter x);
Word power(const Word& w, long k);
// g * w * g^-1
Word conjugate(const Word& w, const Word& g);
bool is_cyclically_reduced(const Word& w);
// Replaces generator i by images[i-1] (inverse letters by inverses).
// Throws InputError for generators without an image.
Word substitute(const Word& w, std::span<const Word> images);

// A cyclically reduced word considered up to rotation.
class CyclicWord {
 public:
  CyclicWord() = default;
  // Throws MathError if `w` is not cyclically reduced.
  explicit CyclicWord(Word w);

  const Word& representative() const { return rep_; }
  std::size_t size() const { return rep_.size(); }
  bool empty() const { return rep_.empty(); }
  // Lexicographically least rotation.
  Word canonical() const;
  CyclicWord inverse() const { return CyclicWord(rep_.inverse()); }

  friend bool operator==(const CyclicWord& u, const CyclicWord& v);

 private:
  Word rep_;
};

struct CyclicReduction {
  CyclicWord core;
  Word conjugator;  // w == conjugator * core * conjugator^-1
};
CyclicReduction cyclic_reduce(const Word& w);

struct PowerDecomposition {
  Word root;
  long exponent = 1;
};
// Smallest root of w. Exponent 1 means w is not a proper power. Throws
// MathError on the empty word.
PowerDecomposition power_decomposition(const Word& w);
bool is_proper_power(const Word& w);

// Alphabet of a free factor spanned by standard generators.
// `generators` is strictly increasing; the rank is its size.
struct Alphabet {
  std::vector<int> generators;

  static Alphabet standard(int rank);
  // Standard alphabet of the given rank when the word fits in it; otherwise
  // the word's own generators, padded with the smallest unused ones.
  static Alphabet fitting(int rank, const Word& w);
  int rank() const { return static_cast<int>(generators.size()); }
  // Position (1-based) of a standard generator, 0 if absent.
  int position(int generator) const;
  bool contains(const Word& w) const;
  // Rename into 1..rank and back.
  Word compress(const Word& w) const;
  Word expand(const Word& w) const;
};

// ASCII codec: a..z are generators 1..26, A..Z their inverses. Throws
// InputError for characters outside the first `rank` generators.
Word parse_word(std::string_view text, int rank = kMaxRank);
std::vector<Word> parse_words(std::span<const std::string> texts, int rank = kMaxRank);
std::string to_string(const Word& w);
std::string to_string(Letter x);
std::string to_string(const CyclicWord& w);

}  // namespace ffc
