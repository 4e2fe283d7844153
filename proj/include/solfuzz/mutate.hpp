// Byte-level mutation operators over transaction wire bytes. The decoder is
// total, so any output is a runnable transaction; operators only promise to
// stay within the wire size cap and to be deterministic for a given RNG
// state.
#pragma once

#include <random>

#include "solfuzz/common.hpp"

namespace solfuzz {

constexpr size_t MAX_TX_WIRE = 4096;

// One random operator applied to a copy of `parent`: bit flip, byte set,
// 16/64-bit interesting-value splice, block duplication, or block deletion.
// Output is never empty and never exceeds MAX_TX_WIRE.
Bytes mutate_once(const Bytes& parent, std::mt19937_64& rng);

// Prefix of `a` spliced onto a suffix of `b` at independent cut points.
Bytes crossover(const Bytes& a, const Bytes& b, std::mt19937_64& rng);

}  // namespace solfuzz
