#include "cbake/oracle.hpp"

#include <stdexcept>

namespace cbake {

namespace {

uint64_t load_le(const uint8_t* p, size_t n) {
  uint64_t v = 0;
  for (size_t i = 0; i < n; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

// Keyed absorb/squeeze mixer over four 64-bit lanes. Input blocks feed lanes
// round-robin, the total length is absorbed as a final block, then four
// cross-mixing rounds diffuse every block into every lane before squeezing
// output words in counter mode.
struct KeyedMixer {
  std::array<uint64_t, 4> lane;

  explicit KeyedMixer(uint64_t seed) {
    for (size_t i = 0; i < 4; ++i) lane[i] = mix64(seed + kGolden * (i + 1));
  }

  void absorb(const Bytes& input) {
    const size_t full = input.size() / 8;
    size_t i = 0;
    for (; i < full; ++i) {
      uint64_t block = load_le(input.data() + 8 * i, 8);
      lane[i & 3] = mix64(lane[i & 3] ^ mix64(block + kGolden * (i + 1)));
    }
    uint64_t tail = load_le(input.data() + 8 * full, input.size() - 8 * full);
    lane[i & 3] = mix64(lane[i & 3] ^ mix64(tail + kGolden * (i + 1)));
    ++i;
    lane[i & 3] = mix64(lane[i & 3] ^ mix64(input.size() + kGolden * (i + 1)));
    for (int round = 0; round < 4; ++round) {
      lane[0] = mix64(lane[0] + lane[1]);
      lane[1] = mix64(lane[1] + lane[2]);
      lane[2] = mix64(lane[2] + lane[3]);
      lane[3] = mix64(lane[3] + lane[0]);
    }
  }

  uint64_t squeeze(uint64_t counter) const {
    return mix64(lane[0] + mix64(lane[1] + mix64(lane[2] + mix64(lane[3] + counter * kGolden))));
  }
};

}  // namespace

OracleTable::OracleTable(unsigned output_bits, uint64_t seed)
    : output_bits_(output_bits), seed_(seed) {
  if (output_bits < kMinBits || output_bits > kMaxBits)
    throw std::invalid_argument("oracle output_bits must be in [1, 512]");
}

const Bytes& OracleTable::query(const Bytes& input) {
  ++query_count_;
  auto it = entries_.find(input);
  if (it != entries_.end()) return it->second;

  KeyedMixer mixer(seed_);
  mixer.absorb(input);
  Bytes out(output_bytes());
  for (size_t i = 0; i < out.size(); i += 8) {
    uint64_t word = mixer.squeeze(i / 8);
    for (size_t j = i; j < out.size() && j < i + 8; ++j)
      out[j] = static_cast<uint8_t>(word >> (8 * (j - i)));
  }
  if (output_bits_ % 8 != 0)
    out.back() &= static_cast<uint8_t>((1u << (output_bits_ % 8)) - 1);
  return entries_.emplace(input, std::move(out)).first->second;
}

}  // namespace cbake
