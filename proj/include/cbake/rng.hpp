#pragma once

#include <random>

#include "cbake/types.hpp"

namespace cbake {

// Deterministic randomness source. Every piece of simulation randomness
// flows through an instance seeded from the run seed, so whole runs replay
// bit-for-bit. Draw helpers avoid std::uniform_int_distribution to keep the
// byte stream independent of the standard library implementation.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  Bytes bytes(size_t n) {
    Bytes out(n);
    size_t i = 0;
    while (i < n) {
      uint64_t w = gen_();
      for (size_t j = 0; j < 8 && i < n; ++j, ++i) out[i] = static_cast<uint8_t>(w >> (8 * j));
    }
    return out;
  }

  // ceil(nbits / 8) bytes with the unused high bits of the last byte zeroed.
  Bytes bits(size_t nbits) {
    Bytes out = bytes((nbits + 7) / 8);
    if (nbits % 8 != 0 && !out.empty())
      out.back() &= static_cast<uint8_t>((1u << (nbits % 8)) - 1);
    return out;
  }

  // Uniform in [0, bound), bound >= 1. Rejection sampling on the top.
  uint64_t below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below(0)");
    if (bound == 1) return 0;
    uint64_t mask = ~uint64_t{0} >> __builtin_clzll((bound - 1) | 1);
    for (;;) {
      uint64_t v = gen_() & mask;
      if (v < bound) return v;
    }
  }

  bool coin() { return (gen_() & 1) != 0; }

  PartyId party_id() { return PartyId::from_bytes(bytes(PartyId::kWidth)); }

  // Independent child stream; advances this stream by one draw.
  Rng fork(uint64_t tag) { return Rng(derive_seed(gen_(), tag)); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cbake
