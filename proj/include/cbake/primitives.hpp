#pragma once

#include <gmpxx.h>

#include <functional>
#include <optional>

#include "cbake/commitment.hpp"
#include "cbake/encoding.hpp"
#include "cbake/oracle.hpp"
#include "cbake/rng.hpp"
#include "cbake/trial_runner.hpp"

namespace cbake {

enum class Profile { toy64, standard2048 };

const char* profile_name(Profile profile);
std::optional<Profile> profile_from_name(const std::string& name);

// Prime-order subgroup of Z_p^*. Elements serialize as fixed-width
// big-endian byte strings of the modulus width.
struct GroupParams {
  mpz_class p;      // modulus, prime
  mpz_class g;      // generator of the order-q subgroup
  mpz_class order;  // q, prime, q | p - 1
  size_t element_bytes = 0;

  // toy64: 64-bit modulus with a 65537-element subgroup, small enough to
  // brute-force discrete logs in tests. standard2048: published 2048-bit
  // MODP group with a 256-bit prime-order subgroup.
  static GroupParams make(Profile profile);

  bool element_in_subgroup(const mpz_class& x) const;
  Bytes encode_element(const mpz_class& x) const;
  // Width and range check only; subgroup membership is a separate question.
  std::optional<mpz_class> decode_element(const Bytes& raw) const;
};

struct KeyPair {
  mpz_class sk;  // uniform in [1, order)
  Bytes pk;      // encoded g^sk
};

KeyPair ka_keygen(const GroupParams& params, Rng& rng);

// Byte encoding of pk_peer^sk_self; nullopt when pk_peer is not a valid
// subgroup element (callers abort their session on that).
std::optional<Bytes> ka(const GroupParams& params, const Bytes& pk_peer, const mpz_class& sk_self);

// KEM derived from the same group: ct = g^r, shared key = KDF(TLV(pk^r)).
// The KDF is a domain-separated oracle so keys are fixed-width strings.
struct Encapsulation {
  Bytes ct;
  Bytes key;
};

KeyPair kem_keygen(const GroupParams& params, Rng& rng);
std::optional<Encapsulation> kem_encaps(const GroupParams& params, OracleTable& kdf,
                                        const Bytes& pk, Rng& rng);
std::optional<Bytes> kem_decaps(const GroupParams& params, OracleTable& kdf, const Bytes& ct,
                                const mpz_class& sk);

// Exhaustive discrete log, viable only against the toy subgroup. Returns
// nullopt if no exponent below the subgroup order matches.
std::optional<mpz_class> brute_force_dlog(const GroupParams& params, const Bytes& pk);

// Indistinguishability game for the KEM. Under cca the adversary may call
// the decapsulation oracle, which refuses (nullopt) the challenge
// ciphertext and anything malformed.
enum class IndAtk { cpa, cca };

using DecapsOracle = std::function<std::optional<Bytes>(const Bytes& ct)>;

struct IndAdversary {
  // The key-derivation oracle is public (random-oracle convention), so the
  // adversary gets it alongside the game values.
  std::function<int(const GroupParams& params, OracleTable& kdf, const Bytes& pk,
                    const Bytes& ct_star, const Bytes& key_star, const DecapsOracle& decaps,
                    Rng& rng)>
      run;
};

struct IndGameConfig {
  Profile profile = Profile::toy64;
  unsigned kdf_bits = 256;
  IndAtk atk = IndAtk::cpa;
  uint64_t trials = 1;
  uint64_t seed = 1;
  ExecMode mode = ExecMode::parallel;
};

GameResult run_ind_atk_game(const IndGameConfig& config, const IndAdversary& adversary);

IndAdversary make_guess_ind_adversary();
// Recovers sk by brute-force discrete log (toy profile only) and
// decapsulates the challenge itself.
IndAdversary make_dlog_ind_adversary();
// Checks that the decaps oracle refuses the challenge ciphertext, then
// guesses; used to pin the cca refusal contract.
IndAdversary make_cca_probe_ind_adversary();

}  // namespace cbake
