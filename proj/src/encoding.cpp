#include "cbake/encoding.hpp"

#include <stdexcept>

namespace cbake {

const char* field_kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::party_id: return "party-id";
    case FieldKind::commitment: return "commitment";
    case FieldKind::public_key: return "public-key";
    case FieldKind::nonce: return "nonce";
    case FieldKind::ciphertext: return "ciphertext";
  }
  return "?";
}

void append_tlv(Bytes& out, unsigned index, const Bytes& payload) {
  if (index < 1 || index > kMaxTupleFields)
    throw std::invalid_argument("tlv index must be in [1, 255]");
  if (payload.size() > kMaxFieldBytes)
    throw std::invalid_argument("tlv payload exceeds 4-byte length field");
  out.push_back(static_cast<uint8_t>(index));
  uint32_t len = static_cast<uint32_t>(payload.size());
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<uint8_t>(len >> shift));
  out.insert(out.end(), payload.begin(), payload.end());
}

std::optional<Bytes> read_tlv(const Bytes& in, size_t& pos, unsigned expect_index) {
  if (pos >= in.size() || in[pos] != expect_index) return std::nullopt;
  if (in.size() - pos < 5) return std::nullopt;
  uint32_t len = 0;
  for (size_t i = 1; i <= 4; ++i) len = (len << 8) | in[pos + i];
  if (in.size() - pos - 5 < len) return std::nullopt;
  Bytes payload(in.begin() + pos + 5, in.begin() + pos + 5 + len);
  pos += 5 + len;
  return payload;
}

std::optional<Bytes> enc(unsigned index, const FieldValue& value) {
  if (index < 1 || index > kMaxTupleFields)
    throw std::invalid_argument("enc index must be in [1, 255]");
  if (value.is_bottom()) return std::nullopt;
  Bytes out;
  append_tlv(out, index, *value.payload);
  return out;
}

std::optional<Bytes> encode_tuple(const std::vector<FieldValue>& values) {
  if (values.empty()) throw std::invalid_argument("encode_tuple on empty tuple");
  if (values.size() > kMaxTupleFields)
    throw std::invalid_argument("encode_tuple on more than 255 fields");
  Bytes out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i].is_bottom()) return std::nullopt;
    append_tlv(out, static_cast<unsigned>(i + 1), *values[i].payload);
  }
  return out;
}

AvValue compute_av(OracleTable& oracle, const std::vector<FieldValue>& values) {
  auto encoded = encode_tuple(values);
  if (!encoded) return std::nullopt;
  return oracle.query(*encoded);
}

std::optional<AvValue> compute_av(BudgetedOracle& oracle, const std::vector<FieldValue>& values) {
  auto encoded = encode_tuple(values);
  if (!encoded) return AvValue{std::nullopt};
  auto digest = oracle.query(*encoded);
  if (!digest) return std::nullopt;  // budget exhausted
  return AvValue{std::move(*digest)};
}

}  // namespace cbake
