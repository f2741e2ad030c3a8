#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "cbake/primitives.hpp"
#include "cbake/rng.hpp"

using namespace cbake;

namespace {

bool probably_prime(const mpz_class& n) { return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0; }

}  // namespace

TEST_SUITE("primitives") {

TEST_CASE("group parameters are consistent in both profiles") {
  for (Profile profile : {Profile::toy64, Profile::standard2048}) {
    GroupParams params = GroupParams::make(profile);
    CHECK(probably_prime(params.p));
    CHECK(probably_prime(params.order));
    CHECK((params.p - 1) % params.order == 0);
    CHECK(params.element_in_subgroup(params.g));
    CHECK(params.g != 1);
    CHECK(params.encode_element(params.g).size() == params.element_bytes);
  }
  GroupParams toy = GroupParams::make(Profile::toy64);
  CHECK(toy.order == 65537);
  CHECK(toy.element_bytes == 8);
  GroupParams std2048 = GroupParams::make(Profile::standard2048);
  CHECK(mpz_sizeinbase(std2048.p.get_mpz_t(), 2) == 2048);
  CHECK(mpz_sizeinbase(std2048.order.get_mpz_t(), 2) == 256);
  CHECK(std2048.element_bytes == 256);
}

TEST_CASE("profile names round-trip") {
  CHECK(profile_from_name(profile_name(Profile::toy64)) == Profile::toy64);
  CHECK(profile_from_name(profile_name(Profile::standard2048)) == Profile::standard2048);
  CHECK(profile_from_name("toy") == Profile::toy64);
  CHECK(profile_from_name("standard") == Profile::standard2048);
  CHECK_FALSE(profile_from_name("p256").has_value());
}

TEST_CASE("element codec rejects out-of-range and wrong-width input") {
  GroupParams params = GroupParams::make(Profile::toy64);
  mpz_class x = 0x1234;
  Bytes raw = params.encode_element(x);
  REQUIRE(raw.size() == params.element_bytes);
  auto back = params.decode_element(raw);
  REQUIRE(back.has_value());
  CHECK(*back == x);

  CHECK_FALSE(params.decode_element(Bytes(params.element_bytes - 1, 0)).has_value());
  CHECK_FALSE(params.decode_element(Bytes(params.element_bytes + 1, 0)).has_value());
  CHECK_FALSE(params.decode_element(params.encode_element(params.p)).has_value());
}

TEST_CASE("key agreement is symmetric") {
  for (Profile profile : {Profile::toy64, Profile::standard2048}) {
    GroupParams params = GroupParams::make(profile);
    Rng rng(101);
    const int iterations = profile == Profile::toy64 ? 200 : 5;
    for (int i = 0; i < iterations; ++i) {
      KeyPair a = ka_keygen(params, rng);
      KeyPair b = ka_keygen(params, rng);
      auto ab = ka(params, b.pk, a.sk);
      auto ba = ka(params, a.pk, b.sk);
      REQUIRE(ab.has_value());
      REQUIRE(ba.has_value());
      CHECK(*ab == *ba);
    }
  }
}

TEST_CASE("key agreement refuses peers outside the subgroup") {
  GroupParams params = GroupParams::make(Profile::toy64);
  Rng rng(102);
  KeyPair honest = ka_keygen(params, rng);

  CHECK_FALSE(ka(params, Bytes(3, 0), honest.sk).has_value());               // wrong width
  CHECK_FALSE(ka(params, params.encode_element(1), honest.sk).has_value());  // identity
  // p - 1 has order 2, which does not divide the odd subgroup order.
  CHECK_FALSE(ka(params, params.encode_element(params.p - 1), honest.sk).has_value());
  CHECK_FALSE(params.element_in_subgroup(params.p - 1));
}

TEST_CASE("the KEM round-trips and rejects bad inputs") {
  for (Profile profile : {Profile::toy64, Profile::standard2048}) {
    GroupParams params = GroupParams::make(profile);
    OracleTable kdf(256, 7);
    Rng rng(103);
    const int iterations = profile == Profile::toy64 ? 100 : 3;
    for (int i = 0; i < iterations; ++i) {
      KeyPair kp = kem_keygen(params, rng);
      auto enc = kem_encaps(params, kdf, kp.pk, rng);
      REQUIRE(enc.has_value());
      CHECK(enc->key.size() == 32);
      auto dec = kem_decaps(params, kdf, enc->ct, kp.sk);
      REQUIRE(dec.has_value());
      CHECK(*dec == enc->key);
    }
  }
}

TEST_CASE("tampered or malformed ciphertexts fail decapsulation cleanly") {
  GroupParams params = GroupParams::make(Profile::toy64);
  OracleTable kdf(256, 8);
  Rng rng(104);
  KeyPair kp = kem_keygen(params, rng);
  auto enc = kem_encaps(params, kdf, kp.pk, rng);
  REQUIRE(enc.has_value());

  CHECK_FALSE(kem_decaps(params, kdf, Bytes(2, 1), kp.sk).has_value());
  CHECK_FALSE(kem_decaps(params, kdf, params.encode_element(params.p - 1), kp.sk).has_value());
  CHECK_FALSE(kem_encaps(params, kdf, params.encode_element(params.p - 1), rng).has_value());

  // A different valid encapsulation decapsulates to a different key.
  auto other = kem_encaps(params, kdf, kp.pk, rng);
  REQUIRE(other.has_value());
  REQUIRE(other->ct != enc->ct);
  auto cross = kem_decaps(params, kdf, other->ct, kp.sk);
  REQUIRE(cross.has_value());
  CHECK(*cross != enc->key);
  CHECK(*cross == other->key);
}

TEST_CASE("brute-force discrete log inverts toy key generation") {
  GroupParams params = GroupParams::make(Profile::toy64);
  Rng rng(105);
  for (int i = 0; i < 20; ++i) {
    KeyPair kp = ka_keygen(params, rng);
    auto sk = brute_force_dlog(params, kp.pk);
    REQUIRE(sk.has_value());
    CHECK(*sk == kp.sk);
  }
  GroupParams big = GroupParams::make(Profile::standard2048);
  CHECK_THROWS_AS(brute_force_dlog(big, big.encode_element(big.g)), std::invalid_argument);
}

TEST_CASE("a guessing distinguisher wins half the time") {
  IndGameConfig config;
  config.trials = 4000;
  config.seed = 201;
  GameResult result = run_ind_atk_game(config, make_guess_ind_adversary());
  CHECK(std::abs(result.empirical_rate - 0.5) <= 0.03);
}

TEST_CASE("a discrete-log distinguisher wins outright against the toy group") {
  IndGameConfig config;
  config.trials = 300;
  config.seed = 202;
  GameResult result = run_ind_atk_game(config, make_dlog_ind_adversary());
  CHECK(result.wins == result.trials);
}

TEST_CASE("the decapsulation oracle refuses the challenge ciphertext") {
  IndGameConfig config;
  config.atk = IndAtk::cca;
  config.trials = 200;
  config.seed = 203;
  config.mode = ExecMode::serial;  // the probe throws on contract violation
  GameResult result = run_ind_atk_game(config, make_cca_probe_ind_adversary());
  CHECK(result.trials == 200);  // reaching here means no violation was seen
}

}  // TEST_SUITE("primitives")
