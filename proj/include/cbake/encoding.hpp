#pragma once

#include <optional>
#include <vector>

#include "cbake/oracle.hpp"
#include "cbake/types.hpp"

namespace cbake {

enum class FieldKind : uint8_t { party_id, commitment, public_key, nonce, ciphertext };

const char* field_kind_name(FieldKind kind);

// A protocol value headed into authentication-value hashing. A disengaged
// payload is the absorbing undefined value: any tuple containing one encodes
// to undefined, and its digest is undefined in turn.
struct FieldValue {
  FieldKind kind;
  std::optional<Bytes> payload;

  static FieldValue make(FieldKind kind, Bytes bytes) {
    return FieldValue{kind, std::move(bytes)};
  }
  static FieldValue bottom(FieldKind kind) { return FieldValue{kind, std::nullopt}; }

  bool is_bottom() const { return !payload.has_value(); }
  bool operator==(const FieldValue&) const = default;
};

// Digest of an encoded tuple; disengaged when any input was undefined.
using AvValue = std::optional<Bytes>;

// 4-byte big-endian length field; larger values are an encoding error.
constexpr uint64_t kMaxFieldBytes = 0xFFFFFFFFull;
constexpr unsigned kMaxTupleFields = 255;

// 1-byte index || 4-byte big-endian length || payload. Disengaged input
// yields disengaged output. index outside [1, 255] or an oversized payload
// throws std::invalid_argument (caller bug, not adversary input).
std::optional<Bytes> enc(unsigned index, const FieldValue& value);

// Concatenation of enc(i, values[i-1]) for i = 1..n; disengaged if any
// field is undefined. Empty tuples throw.
std::optional<Bytes> encode_tuple(const std::vector<FieldValue>& values);

// Oracle digest of the tuple encoding: the authentication-value map.
AvValue compute_av(OracleTable& oracle, const std::vector<FieldValue>& values);

// Adversary-side variant: outer nullopt means the query budget ran out,
// inner nullopt is the undefined digest.
std::optional<AvValue> compute_av(BudgetedOracle& oracle, const std::vector<FieldValue>& values);

// Wire helpers shared with message (de)serialization. read_tlv expects the
// field written as index `expect_index` at `pos`, advances pos past it, and
// returns nullopt on any malformation (wrong index, truncated length or
// payload).
void append_tlv(Bytes& out, unsigned index, const Bytes& payload);
std::optional<Bytes> read_tlv(const Bytes& in, size_t& pos, unsigned expect_index);

}  // namespace cbake
