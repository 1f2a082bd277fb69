#include "ffc/words.hpp"

#include <algorithm>
#include <set>

#include "ffc/errors.hpp"

namespace ffc {

Word::Word(std::initializer_list<Letter> letters)
    : Word(reduce(std::span<const Letter>(letters.begin(), letters.size()))) {}

Word Word::reduce(std::span<const Letter> raw) {
  Word out;
  out.letters_.reserve(raw.size());
  for (Letter x : raw) {
    if (x == 0) throw InputError("letter 0 is not a generator");
    if (!out.letters_.empty() && out.letters_.back() == -x)
      out.letters_.pop_back();
    else
      out.letters_.push_back(x);
  }
  return out;
}

Word Word::reduce(std::span<const Letter> raw, int rank) {
  for (Letter x : raw) {
    if (x == 0 || generator_of(x) > rank)
      throw InputError("generator index " + std::to_string(generator_of(x)) +
                       " outside rank " + std::to_string(rank));
  }
  return reduce(raw);
}

Word Word::inverse() const {
  Word out;
  out.letters_.resize(letters_.size());
  std::transform(letters_.rbegin(), letters_.rend(), out.letters_.begin(),
                 [](Letter x) { return -x; });
  return out;
}

Word Word::slice(std::size_t pos, std::size_t len) const {
  Word out;
  out.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                      letters_.begin() + static_cast<std::ptrdiff_t>(pos + len));
  return out;
}

int Word::max_generator() const {
  int m = 0;
  for (Letter x : letters_) m = std::max(m, generator_of(x));
  return m;
}

Word operator*(const Word& u, const Word& v) {
  Word out = u;
  out *= v;
  return out;
}

Word& Word::operator*=(const Word& v) {
  std::size_t k = 0;
  while (k < v.size() && !letters_.empty() && letters_.back() == -v.letters_[k]) {
    letters_.pop_back();
    ++k;
  }
  letters_.insert(letters_.end(), v.letters_.begin() + static_cast<std::ptrdiff_t>(k),
                  v.letters_.end());
  return *this;
}

Word letter_word(Letter x) { return Word{x}; }

Word power(const Word& w, long k) {
  if (k < 0) return power(w.inverse(), -k);
  if (k == 0 || w.empty()) return {};
  auto [core, conj] = cyclic_reduce(w);
  const auto& c = core.representative().letters();
  std::vector<Letter> raw;
  raw.reserve(c.size() * static_cast<std::size_t>(k));
  for (long i = 0; i < k; ++i) raw.insert(raw.end(), c.begin(), c.end());
  return conj * Word::reduce(raw) * conj.inverse();
}

Word conjugate(const Word& w, const Word& g) { return g * w * g.inverse(); }

Word substitute(const Word& w, std::span<const Word> images) {
  std::vector<Letter> raw;
  for (Letter x : w) {
    const auto g = static_cast<std::size_t>(generator_of(x));
    if (g > images.size()) throw InputError("no image for generator " + to_string(x));
    const Word& img = images[g - 1];
    if (x > 0)
      raw.insert(raw.end(), img.begin(), img.end());
    else
      for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it) raw.push_back(-*it);
  }
  return Word::reduce(raw);
}

bool is_cyclically_reduced(const Word& w) {
  return w.size() < 2 || w.front() != -w.back();
}

CyclicWord::CyclicWord(Word w) : rep_(std::move(w)) {
  if (!is_cyclically_reduced(rep_))
    throw MathError("word " + to_string(rep_) + " is not cyclically reduced");
}

Word CyclicWord::canonical() const {
  const auto& s = rep_.letters();
  const std::size_t n = s.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      Letter x = s[(r + i) % n], y = s[(best + i) % n];
      if (x != y) {
        if (x < y) best = r;
        break;
      }
    }
  }
  std::vector<Letter> rot(n);
  for (std::size_t i = 0; i < n; ++i) rot[i] = s[(best + i) % n];
  return Word::reduce(rot);
}

bool operator==(const CyclicWord& u, const CyclicWord& v) {
  if (u.size() != v.size()) return false;
  const auto& a = u.rep_.letters();
  const auto& b = v.rep_.letters();
  const std::size_t n = a.size();
  for (std::size_t r = 0; r < std::max<std::size_t>(n, 1); ++r) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = a[(r + i) % n] == b[i];
    if (ok) return true;
  }
  return false;
}

CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t k = 0;
  const std::size_t n = w.size();
  while (2 * k + 1 < n && w[k] == -w[n - 1 - k]) ++k;
  return {CyclicWord(w.slice(k, n - 2 * k)), w.slice(0, k)};
}

PowerDecomposition power_decomposition(const Word& w) {
  if (w.empty()) throw MathError("the empty word has no root");
  auto [core, conj] = cyclic_reduce(w);
  const auto& c = core.representative().letters();
  const std::size_t n = c.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = c[i] == c[i - p];
    if (periodic) {
      Word root = conj * core.representative().slice(0, p) * conj.inverse();
      return {root, static_cast<long>(n / p)};
    }
  }
  return {w, 1};
}

bool is_proper_power(const Word& w) { return power_decomposition(w).exponent > 1; }

Alphabet Alphabet::standard(int rank) {
  Alphabet a;
  for (int i = 1; i <= rank; ++i) a.generators.push_back(i);
  return a;
}

Alphabet Alphabet::fitting(int rank, const Word& w) {
  if (w.max_generator() <= rank) return standard(rank);
  std::set<int> used;
  for (Letter x : w) used.insert(generator_of(x));
  if (static_cast<int>(used.size()) > rank)
    throw InputError("word " + to_string(w) + " uses more than " +
                     std::to_string(rank) + " generators");
  for (int g = 1; static_cast<int>(used.size()) < rank; ++g) used.insert(g);
  return Alphabet{{used.begin(), used.end()}};
}

int Alphabet::position(int generator) const {
  auto it = std::lower_bound(generators.begin(), generators.end(), generator);
  if (it == generators.end() || *it != generator) return 0;
  return static_cast<int>(it - generators.begin()) + 1;
}

bool Alphabet::contains(const Word& w) const {
  return std::all_of(w.begin(), w.end(),
                     [&](Letter x) { return position(generator_of(x)) != 0; });
}

Word Alphabet::compress(const Word& w) const {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (Letter x : w) {
    int p = position(generator_of(x));
    if (p == 0) throw InputError("word " + to_string(w) + " leaves the alphabet");
    out.push_back(x > 0 ? p : -p);
  }
  return Word::reduce(out);
}

Word Alphabet::expand(const Word& w) const {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (Letter x : w) {
    int g = generators.at(static_cast<std::size_t>(generator_of(x) - 1));
    out.push_back(x > 0 ? g : -g);
  }
  return Word::reduce(out);
}

Word parse_word(std::string_view text, int rank) {
  std::vector<Letter> raw;
  raw.reserve(text.size());
  for (char ch : text) {
    Letter x = 0;
    if (ch >= 'a' && ch <= 'z') x = ch - 'a' + 1;
    else if (ch >= 'A' && ch <= 'Z') x = -(ch - 'A' + 1);
    else throw InputError(std::string("invalid character '") + ch + "' in word");
    if (generator_of(x) > rank)
      throw InputError(std::string("letter '") + ch + "' is beyond rank " +
                       std::to_string(rank));
    raw.push_back(x);
  }
  return Word::reduce(raw);
}

std::vector<Word> parse_words(std::span<const std::string> texts, int rank) {
  std::vector<Word> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse_word(t, rank));
  return out;
}

std::string to_string(Letter x) {
  if (generator_of(x) > kMaxRank) return "<" + std::to_string(x) + ">";
  return std::string(1, static_cast<char>(x > 0 ? 'a' + x - 1 : 'A' - x - 1));
}

std::string to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Letter x : w) s += to_string(x);
  return s;
}

std::string to_string(const CyclicWord& w) { return to_string(w.representative()); }

}  // namespace ffc
