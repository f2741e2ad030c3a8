#include "cbake/primitives.hpp"

#include <stdexcept>

namespace cbake {

namespace {

// 2048-bit MODP group with a 256-bit prime-order subgroup (published
// parameters; p and q prime, q | p - 1, g generates the order-q subgroup).
constexpr const char* kStdP =
    "87A8E61DB4B6663CFFBBD19C651959998CEEF608660DD0F25D2CEED4435E3B00"
    "E00DF8F1D61957D4FAF7DF4561B2AA3016C3D91134096FAA3BF4296D830E9A7C"
    "209E0C6497517ABD5A8A9D306BCF67ED91F9E6725B4758C022E0B1EF4275BF7B"
    "6C5BFC11D45F9088B941F54EB1E59BB8BC39A0BF12307F5C4FDB70C581B23F76"
    "B63ACAE1CAA6B7902D52526735488A0EF13C6D9A51BFA4AB3AD8347796524D8E"
    "F6A167B5A41825D967E144E5140564251CCACB83E6B486F6B3CA3F7971506026"
    "C0B857F689962856DED4010ABD0BE621C3A3960A54E710C375F26375D7014103"
    "A4B54330C198AF126116D2276E11715F693877FAD7EF09CADB094AE91E1A1597";
constexpr const char* kStdQ =
    "8CF83642A709A097B447997640129DA299B1A47D1EB3750BA308B0FE64F5FBD3";
constexpr const char* kStdG =
    "3FB32C9B73134D0B2E77506660EDBD484CA7B18F21EF205407F4793A1A0BA125"
    "10DBC15077BE463FFF4FED4AAC0BB555BE3A6C1B0C6B47B1BC3773BF7E8C6F62"
    "901228F8C28CBB18A55AE31341000A650196F931C77A57F2DDF463E5E9EC144B"
    "777DE62AAAB8A8628AC376D282D6ED3864E67982428EBC831D14348F6F2F9193"
    "B5045AF2767164E1DFC967C1FB3F2E55A4BD1BFFE83B9C80D052B985D182EA0A"
    "DB2A3B7313D3FE14C8484B1E052588B9B7D2BBD2DF016199ECD06E1557CD0915"
    "B3353BBB64E0EC377FD028370DF92B52C7891428CDC67EB6184B523D1DB246C3"
    "2F63078490F00EF8D647D148D47954515E2327CFEF98C582664B4C0F6CC41659";

// 64-bit toy modulus: p = 140735340904520 * 65537 + 1, subgroup order
// 65537, generator 2^((p-1)/65537) mod p. Discrete logs fall to a 2^16 scan.
constexpr const char* kToyP = "8000000000488049";
constexpr const char* kToyQ = "10001";
constexpr const char* kToyG = "87CDD0B1F6D9277";

mpz_class uniform_below(const mpz_class& bound, Rng& rng) {
  size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  for (;;) {
    Bytes raw = rng.bits(bits);
    mpz_class v;
    mpz_import(v.get_mpz_t(), raw.size(), -1, 1, 0, 0, raw.data());
    if (v < bound) return v;
  }
}

mpz_class powm(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

Bytes kdf_input(const GroupParams& params, const mpz_class& shared) {
  FieldValue field = FieldValue::make(FieldKind::public_key, params.encode_element(shared));
  return *encode_tuple({field});
}

}  // namespace

const char* profile_name(Profile profile) {
  return profile == Profile::toy64 ? "toy64" : "standard2048";
}

std::optional<Profile> profile_from_name(const std::string& name) {
  if (name == "toy64" || name == "toy") return Profile::toy64;
  if (name == "standard2048" || name == "standard") return Profile::standard2048;
  return std::nullopt;
}

GroupParams GroupParams::make(Profile profile) {
  GroupParams params;
  if (profile == Profile::toy64) {
    params.p = mpz_class(kToyP, 16);
    params.g = mpz_class(kToyG, 16);
    params.order = mpz_class(kToyQ, 16);
  } else {
    params.p = mpz_class(kStdP, 16);
    params.g = mpz_class(kStdG, 16);
    params.order = mpz_class(kStdQ, 16);
  }
  params.element_bytes = (mpz_sizeinbase(params.p.get_mpz_t(), 2) + 7) / 8;
  return params;
}

bool GroupParams::element_in_subgroup(const mpz_class& x) const {
  if (x <= 1 || x >= p) return false;
  return powm(x, order, p) == 1;
}

Bytes GroupParams::encode_element(const mpz_class& x) const {
  Bytes out(element_bytes, 0);
  size_t count = 0;
  mpz_export(out.data(), &count, 1, 1, 0, 0, x.get_mpz_t());
  if (count < element_bytes && count > 0) {
    // mpz_export writes from the front; shift into big-endian alignment.
    std::copy_backward(out.begin(), out.begin() + count, out.begin() + element_bytes);
    std::fill(out.begin(), out.begin() + (element_bytes - count), 0);
  }
  return out;
}

std::optional<mpz_class> GroupParams::decode_element(const Bytes& raw) const {
  if (raw.size() != element_bytes) return std::nullopt;
  mpz_class v;
  mpz_import(v.get_mpz_t(), raw.size(), 1, 1, 0, 0, raw.data());
  if (v >= p) return std::nullopt;
  return v;
}

KeyPair ka_keygen(const GroupParams& params, Rng& rng) {
  mpz_class sk = uniform_below(params.order - 1, rng) + 1;  // [1, order)
  return KeyPair{sk, params.encode_element(powm(params.g, sk, params.p))};
}

std::optional<Bytes> ka(const GroupParams& params, const Bytes& pk_peer,
                        const mpz_class& sk_self) {
  auto peer = params.decode_element(pk_peer);
  if (!peer || !params.element_in_subgroup(*peer)) return std::nullopt;
  return params.encode_element(powm(*peer, sk_self, params.p));
}

KeyPair kem_keygen(const GroupParams& params, Rng& rng) { return ka_keygen(params, rng); }

std::optional<Encapsulation> kem_encaps(const GroupParams& params, OracleTable& kdf,
                                        const Bytes& pk, Rng& rng) {
  auto pk_elem = params.decode_element(pk);
  if (!pk_elem || !params.element_in_subgroup(*pk_elem)) return std::nullopt;
  mpz_class r = uniform_below(params.order - 1, rng) + 1;
  Encapsulation out;
  out.ct = params.encode_element(powm(params.g, r, params.p));
  out.key = kdf.query(kdf_input(params, powm(*pk_elem, r, params.p)));
  return out;
}

std::optional<Bytes> kem_decaps(const GroupParams& params, OracleTable& kdf, const Bytes& ct,
                                const mpz_class& sk) {
  auto ct_elem = params.decode_element(ct);
  if (!ct_elem || !params.element_in_subgroup(*ct_elem)) return std::nullopt;
  return kdf.query(kdf_input(params, powm(*ct_elem, sk, params.p)));
}

std::optional<mpz_class> brute_force_dlog(const GroupParams& params, const Bytes& pk) {
  auto target = params.decode_element(pk);
  if (!target) return std::nullopt;
  if (params.order > 1 << 20)
    throw std::invalid_argument("brute_force_dlog needs a toy-sized subgroup");
  mpz_class acc = 1;
  uint64_t order = params.order.get_ui();
  for (uint64_t e = 1; e < order; ++e) {
    acc = acc * params.g % params.p;
    if (acc == *target) return mpz_class(e);
  }
  return std::nullopt;
}

GameResult run_ind_atk_game(const IndGameConfig& config, const IndAdversary& adversary) {
  GroupParams params = GroupParams::make(config.profile);
  auto trial = [&](uint64_t, uint64_t seed) {
    OracleTable kdf(config.kdf_bits, derive_seed(seed, 1));
    Rng rng(derive_seed(seed, 2));
    KeyPair kp = kem_keygen(params, rng);
    bool b = rng.coin();
    auto enc = kem_encaps(params, kdf, kp.pk, rng);
    Bytes key_star = b ? rng.bits(config.kdf_bits) : enc->key;
    DecapsOracle decaps = [&](const Bytes& ct) -> std::optional<Bytes> {
      if (config.atk != IndAtk::cca) return std::nullopt;
      if (ct == enc->ct) return std::nullopt;
      return kem_decaps(params, kdf, ct, kp.sk);
    };
    int guess = adversary.run(params, kdf, kp.pk, enc->ct, key_star, decaps, rng);
    return (guess != 0) == b;
  };
  uint64_t wins =
      run_trials(config.trials, derive_seed(config.seed, 0x1ed), trial, config.mode);
  return make_game_result(config.trials, wins);
}

IndAdversary make_guess_ind_adversary() {
  IndAdversary adversary;
  adversary.run = [](const GroupParams&, OracleTable&, const Bytes&, const Bytes&, const Bytes&,
                     const DecapsOracle&, Rng& rng) { return rng.coin() ? 1 : 0; };
  return adversary;
}

IndAdversary make_dlog_ind_adversary() {
  IndAdversary adversary;
  adversary.run = [](const GroupParams& params, OracleTable& kdf, const Bytes& pk,
                     const Bytes& ct_star, const Bytes& key_star, const DecapsOracle&, Rng&) {
    auto sk = brute_force_dlog(params, pk);
    if (!sk) return 1;
    auto real_key = kem_decaps(params, kdf, ct_star, *sk);
    return (real_key && *real_key == key_star) ? 0 : 1;
  };
  return adversary;
}

IndAdversary make_cca_probe_ind_adversary() {
  IndAdversary adversary;
  adversary.run = [](const GroupParams&, OracleTable&, const Bytes&, const Bytes& ct_star,
                     const Bytes&, const DecapsOracle& decaps, Rng& rng) {
    if (decaps(ct_star).has_value())
      throw std::logic_error("decaps oracle answered the challenge ciphertext");
    return rng.coin() ? 1 : 0;
  };
  return adversary;
}

}  // namespace cbake
