#include "ffc/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "ffc/errors.hpp"

namespace ffc {

std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

WhiteheadAutomorphism random_permutation(int rank, std::mt19937_64& rng) {
  std::vector<Letter> images(static_cast<std::size_t>(rank));
  std::iota(images.begin(), images.end(), 1);
  std::shuffle(images.begin() + 1, images.end(), rng);
  std::bernoulli_distribution flip(0.5);
  for (std::size_t i = 1; i < images.size(); ++i)
    if (flip(rng)) images[i] = -images[i];
  return WhiteheadAutomorphism::permutation(rank, std::move(images));
}

WhiteheadAutomorphism random_multiplier(int rank, std::mt19937_64& rng) {
  const auto letters = ordered_letters(rank);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  const Letter m = letters[pick(rng)];
  std::uint64_t mask = std::uint64_t{1} << WhiteheadAutomorphism::bit(m);
  std::bernoulli_distribution coin(0.5);
  for (Letter x : letters) {
    if (generator_of(x) == generator_of(m)) continue;
    // a must keep its image: keep both a and A out of the subset.
    if (generator_of(x) == 1) continue;
    if (coin(rng)) mask |= std::uint64_t{1} << WhiteheadAutomorphism::bit(x);
  }
  return WhiteheadAutomorphism::multiplier_mask(rank, m, mask);
}

}  // namespace

AutomorphismTranscript random_automorphism_fixing_a(int rank, int max_moves, std::mt19937_64& rng) {
  if (rank < 2) throw InputError("random automorphisms need rank >= 2");
  if (max_moves < 1) throw InputError("need at least one move");
  std::uniform_int_distribution<int> count(1, max_moves);
  std::bernoulli_distribution permute(0.25);
  AutomorphismTranscript out;
  for (int k = count(rng); k > 0; --k)
    out.push_back(permute(rng) ? random_permutation(rank, rng) : random_multiplier(rank, rng));
  return out;
}

}  // namespace ffc
