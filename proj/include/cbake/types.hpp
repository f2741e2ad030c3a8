#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbake {

using Bytes = std::vector<uint8_t>;

// splitmix64 finalizer: bijective, strong avalanche. Building block for
// seed derivation and the oracle sampling mixer.
constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline uint64_t mix64(uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent child seed for trial/oracle substreams. Distinct (base, index)
// pairs give unrelated streams.
inline uint64_t derive_seed(uint64_t base, uint64_t index) {
  return mix64(base ^ mix64(index + 1));
}

// Fixed-width opaque party identity.
struct PartyId {
  static constexpr size_t kWidth = 16;
  std::array<uint8_t, kWidth> id{};

  static PartyId from_index(uint64_t index) {
    PartyId p;
    uint64_t a = mix64(index ^ 0x1dULL);
    uint64_t b = mix64(index ^ 0xb0ULL);
    for (size_t i = 0; i < 8; ++i) {
      p.id[i] = static_cast<uint8_t>(a >> (8 * i));
      p.id[8 + i] = static_cast<uint8_t>(b >> (8 * i));
    }
    return p;
  }

  static PartyId from_bytes(const Bytes& raw) {
    if (raw.size() != kWidth) throw std::invalid_argument("party id must be 16 bytes");
    PartyId p;
    std::copy(raw.begin(), raw.end(), p.id.begin());
    return p;
  }

  Bytes bytes() const { return Bytes(id.begin(), id.end()); }
  auto operator<=>(const PartyId&) const = default;
};

// value as little-endian bytes, zero-padded to width. Used to enumerate small
// byte-string spaces deterministically.
inline Bytes le_bytes(uint64_t value, size_t width) {
  Bytes out(width, 0);
  for (size_t i = 0; i < width && i < 8; ++i) out[i] = static_cast<uint8_t>(value >> (8 * i));
  return out;
}

inline std::string to_hex(const Bytes& data) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

inline Bytes from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit");
  };
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<uint8_t>((nib(hex[2 * i]) << 4) | nib(hex[2 * i + 1]));
  return out;
}

}  // namespace cbake
