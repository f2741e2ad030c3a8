#include <map>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "cbake/encoding.hpp"
#include "cbake/oracle.hpp"
#include "cbake/rng.hpp"

using namespace cbake;

namespace {

FieldValue nonce_field(Bytes payload) { return FieldValue::make(FieldKind::nonce, std::move(payload)); }

}  // namespace

TEST_SUITE("encoding") {

TEST_CASE("single-field wire layout is index, be32 length, payload") {
  auto one = enc(1, nonce_field(Bytes{0xAA}));
  REQUIRE(one.has_value());
  CHECK(*one == from_hex("0100000001aa"));

  auto two = enc(2, nonce_field(Bytes{0xBB}));
  REQUIRE(two.has_value());
  CHECK(*two == from_hex("0200000001bb"));

  auto empty = enc(3, nonce_field(Bytes{}));
  REQUIRE(empty.has_value());
  CHECK(*empty == from_hex("0300000000"));

  Bytes wide(300, 0x5c);
  auto long_field = enc(255, nonce_field(wide));
  REQUIRE(long_field.has_value());
  CHECK(long_field->size() == 1 + 4 + 300);
  CHECK((*long_field)[0] == 0xff);
  CHECK((*long_field)[3] == 0x01);  // 300 = 0x0000012c big-endian
  CHECK((*long_field)[4] == 0x2c);
}

TEST_CASE("tuples with shifted field boundaries encode differently") {
  auto split = encode_tuple({nonce_field(Bytes{0xAA}), nonce_field(Bytes{0xBB})});
  auto merged = encode_tuple({nonce_field(Bytes{0xAA, 0xBB}), nonce_field(Bytes{})});
  REQUIRE(split.has_value());
  REQUIRE(merged.has_value());
  CHECK(*split != *merged);
  CHECK(*split == from_hex("0100000001aa0200000001bb"));
  CHECK(*merged == from_hex("0100000002aabb0200000000"));
}

TEST_CASE("undefined fields absorb the whole tuple") {
  CHECK_FALSE(enc(1, FieldValue::bottom(FieldKind::public_key)).has_value());

  auto poisoned = encode_tuple({nonce_field(Bytes{1}), FieldValue::bottom(FieldKind::public_key)});
  CHECK_FALSE(poisoned.has_value());

  OracleTable oracle(64, 4);
  CHECK_FALSE(compute_av(oracle, {FieldValue::bottom(FieldKind::nonce)}).has_value());
  CHECK(oracle.query_count() == 0);
}

TEST_CASE("caller-side encoding mistakes throw") {
  CHECK_THROWS_AS(enc(0, nonce_field(Bytes{})), std::invalid_argument);
  CHECK_THROWS_AS(enc(256, nonce_field(Bytes{})), std::invalid_argument);
  CHECK_THROWS_AS(encode_tuple({}), std::invalid_argument);
}

TEST_CASE("random tuples never collide") {
  Rng rng(31337);
  // encoding -> payload list; equal encodings must mean equal payload lists.
  std::map<Bytes, std::vector<Bytes>> seen;
  for (int iter = 0; iter < 100000; ++iter) {
    const size_t nfields = 1 + rng.below(3);
    std::vector<FieldValue> tuple;
    std::vector<Bytes> payloads;
    for (size_t i = 0; i < nfields; ++i) {
      Bytes payload = rng.bytes(rng.below(9));
      payloads.push_back(payload);
      tuple.push_back(nonce_field(std::move(payload)));
    }
    auto encoded = encode_tuple(tuple);
    REQUIRE(encoded.has_value());
    auto [it, inserted] = seen.emplace(*encoded, payloads);
    if (!inserted) CHECK(it->second == payloads);
  }
}

TEST_CASE("read_tlv rejects malformed fields") {
  Bytes buf;
  append_tlv(buf, 1, Bytes{0xAA, 0xBB});
  size_t pos = 0;
  auto got = read_tlv(buf, pos, 1);
  REQUIRE(got.has_value());
  Bytes expect{0xAA, 0xBB};
  CHECK(*got == expect);
  CHECK(pos == buf.size());

  pos = 0;
  CHECK_FALSE(read_tlv(buf, pos, 2).has_value());  // wrong index

  Bytes inside_length(buf.begin(), buf.begin() + 3);
  pos = 0;
  CHECK_FALSE(read_tlv(inside_length, pos, 1).has_value());

  Bytes short_payload(buf.begin(), buf.end() - 1);
  pos = 0;
  CHECK_FALSE(read_tlv(short_payload, pos, 1).has_value());

  pos = buf.size();  // nothing left to read
  CHECK_FALSE(read_tlv(buf, pos, 1).has_value());
}

TEST_CASE("budgeted digests distinguish refusal from the undefined digest") {
  OracleTable table(16, 6);
  QueryBudget budget{1, 0};
  BudgetedOracle oracle(table, budget);
  const std::vector<FieldValue> fine{nonce_field(Bytes{1})};
  const std::vector<FieldValue> poisoned{FieldValue::bottom(FieldKind::nonce)};

  auto undefined = compute_av(oracle, poisoned);
  REQUIRE(undefined.has_value());       // the evaluation itself went through
  CHECK_FALSE(undefined->has_value());  // and yielded the undefined digest
  CHECK(budget.used == 0);              // without spending any budget

  auto first = compute_av(oracle, fine);
  REQUIRE(first.has_value());
  CHECK(first->has_value());

  auto refused = compute_av(oracle, fine);
  CHECK_FALSE(refused.has_value());  // budget exhausted
}

TEST_CASE("oracle and budgeted digests agree on defined tuples") {
  OracleTable table(32, 8);
  QueryBudget budget{4, 0};
  BudgetedOracle metered(table, budget);
  const std::vector<FieldValue> tuple{nonce_field(Bytes{1, 2}), nonce_field(Bytes{3})};

  auto direct = compute_av(table, tuple);
  auto through_budget = compute_av(metered, tuple);
  REQUIRE(direct.has_value());
  REQUIRE(through_budget.has_value());
  REQUIRE(through_budget->has_value());
  CHECK(*direct == **through_budget);
}

}  // TEST_SUITE("encoding")
