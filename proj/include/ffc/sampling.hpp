#pragma once

// Seeded random automorphisms. Sample i of a run draws from its own engine
// seeded by (seed, i), so samples are independent of evaluation order.

#include <cstdint>
#include <random>

#include "ffc/whitehead.hpp"

namespace ffc {

std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index);

// A composition of 1..max_moves Whitehead automorphisms, each fixing the
// first standard generator letter by letter.
AutomorphismTranscript random_automorphism_fixing_a(int rank, int max_moves, std::mt19937_64& rng);

}  // namespace ffc
