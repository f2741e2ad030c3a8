// Acceptance gate: one self-contained check per release criterion, each
// printed as a single PASS/FAIL line. Exit status 0 iff every criterion holds.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cbake/experiments.hpp"

using namespace cbake;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string& detail)> run;
};

EnvConfig toy_env(unsigned av_bits) { return EnvConfig{Profile::toy64, av_bits, 256, 256, 256}; }

double three_sigma(double p, uint64_t n) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// ---- criterion 1: honest runs always finalize ------------------------------

bool honest_completeness(std::string& detail) {
  const uint64_t per_protocol = 1000;
  uint64_t total = 0, good = 0;
  for (Protocol protocol : {Protocol::ka2, Protocol::kem2, Protocol::ka3, Protocol::kem3}) {
    auto trial = [&](uint64_t, uint64_t seed) {
      ExchangeSetup setup;
      setup.protocol = protocol;
      setup.initiator = PartyId::from_index(0);
      setup.responder = PartyId::from_index(1);
      setup.env = toy_env(256);
      setup.mode = NetMode::am;
      setup.seed = seed;
      ExchangeRecord rec = run_exchange(setup, make_passthrough_adversary());
      return rec.finalize_accept && rec.initiator_output.key == rec.responder_output.key &&
             !detect_emulation_break(rec);
    };
    good += run_trials(per_protocol, 0x11000 + static_cast<uint64_t>(protocol), trial,
                       ExecMode::parallel);
    total += per_protocol;
  }
  std::ostringstream oss;
  oss << good << "/" << total << " exchanges finalized across all four flows";
  detail = oss.str();
  return good == total;
}

// ---- criterion 2: the interception attack matches its curve ----------------

bool attack_curves(std::string& detail) {
  bool ok = true;
  std::ostringstream oss;
  for (Protocol protocol : {Protocol::ka2, Protocol::kem2}) {
    for (uint64_t queries : {64ull, 256ull}) {
      TwoPassAttackConfig config;
      config.protocol = protocol;
      config.queries = queries;
      config.trials = 10000;
      config.tolerance = 0.02;
      config.seed = 0x22000 + queries + static_cast<uint64_t>(protocol);
      ExperimentReport report = run_two_pass_attack(config);
      ok = ok && report.pass;
      oss << protocol_name(protocol) << "@q" << queries << " rate=" << report.empirical_rate
          << " ref=" << report.reference_value << (report.pass ? " ok; " : " MISS; ");
    }
  }
  detail = oss.str();
  return ok;
}

// ---- criterion 3: the collision game respects form and cap -----------------

bool collision_game(std::string& detail) {
  CollisionConfig config;
  config.seed = 0x33000;
  ExperimentReport report = run_combined_collision(config);
  const double cap = collision_bound(config.l_bits, config.draws, config.delta);
  const bool under_cap = report.empirical_rate <= cap + three_sigma(cap, report.trials);
  std::ostringstream oss;
  oss << "rate=" << report.empirical_rate << " closed-form=" << report.reference_value
      << " cap=" << cap;
  detail = oss.str();
  return report.pass && under_cap;
}

// ---- criterion 4: game wins stay under the per-exchange bound --------------

bool emulation_games(std::string& detail) {
  const uint64_t trials = 2000;
  BoundParams bound_params;
  bound_params.av_bits = 8;
  const double bound = per_exchange_emulation_bound(bound_params);
  const double allowance = bound + three_sigma(bound, trials);

  bool ok = true;
  uint64_t cases = 0;
  double worst = 0.0;
  int case_index = 0;
  auto judge = [&](const GameResult& result, bool identity) {
    ++cases;
    worst = std::max(worst, result.empirical_rate);
    if (identity)
      ok = ok && result.wins == 0;
    else
      ok = ok && result.empirical_rate <= allowance;
  };

  for (GameVariant variant : {GameVariant::av, GameVariant::zero, GameVariant::one}) {
    GameConfig config;
    config.variant = variant;
    config.env = toy_env(8);
    config.query_limit = 64;
    config.trials = trials;
    config.seed = derive_seed(0x44000, static_cast<uint64_t>(++case_index));

    judge(run_ka_game(config, make_ka_identity_adversary()), true);
    judge(run_ka_game(config, make_ka_commit_substitution_adversary()), false);
    judge(run_ka_game(config, make_ka_responder_key_substitution_adversary()), false);
    judge(run_ka_game(config, make_ka_receiver_substitution_adversary()), false);
    judge(run_ka_game(config, make_ka_oracle_search_adversary()), false);

    judge(run_kem_game(config, make_kem_identity_adversary()), true);
    judge(run_kem_game(config, make_kem_commit_substitution_adversary()), false);
    judge(run_kem_game(config, make_kem_encap_substitution_adversary()), false);
    judge(run_kem_game(config, make_kem_receiver_substitution_adversary()), false);
    judge(run_kem_game(config, make_kem_oracle_search_adversary()), false);
  }
  std::ostringstream oss;
  oss << cases << " variant/player cases, worst rate=" << worst << " allowance=" << allowance;
  detail = oss.str();
  return ok;
}

// ---- criterion 5: any in-flight tampering blocks finalization --------------

AdversaryFactory make_field_flip_factory(size_t msg_ordinal, size_t field_index) {
  return [=](uint64_t) -> Adversary {
    auto transit = std::make_shared<size_t>(0);
    return [=](AdversaryView& view) -> AdversaryAction {
      const size_t ordinal = (*transit)++;
      if (ordinal == msg_ordinal && field_index < view.in_flight.fields.size() &&
          !view.in_flight.fields[field_index].empty()) {
        ProtocolMessage tampered = view.in_flight;
        tampered.fields[field_index][0] ^= 0x01;
        return AdversaryAction::modify(std::move(tampered));
      }
      return AdversaryAction::deliver();
    };
  };
}

AdversaryFactory make_receiver_swap_factory() {
  return [](uint64_t) -> Adversary {
    return [](AdversaryView& view) -> AdversaryAction {
      ProtocolMessage tampered = view.in_flight;
      tampered.receiver = PartyId::from_index(77);
      return AdversaryAction::modify(std::move(tampered));
    };
  };
}

bool tamper_rejection(std::string& detail) {
  const uint64_t trials = 1000;
  const std::map<Protocol, std::vector<size_t>> field_counts{
      {Protocol::ka2, {1, 1}},
      {Protocol::kem2, {1, 1}},
      {Protocol::ka3, {1, 1, 2}},
      {Protocol::kem3, {2, 1, 2}},
  };

  uint64_t total = 0, accepted = 0;
  auto measure = [&](Protocol protocol, const AdversaryFactory& factory, uint64_t tag) {
    auto trial = [&](uint64_t, uint64_t seed) {
      ExchangeSetup setup;
      setup.protocol = protocol;
      setup.initiator = PartyId::from_index(0);
      setup.responder = PartyId::from_index(1);
      setup.env = toy_env(128);
      setup.seed = seed;
      return run_exchange(setup, factory(seed)).finalize_accept;
    };
    accepted += run_trials(trials, tag, trial, ExecMode::parallel);
    total += trials;
  };

  uint64_t tag = 0x55000;
  for (const auto& [protocol, counts] : field_counts) {
    for (size_t msg = 0; msg < counts.size(); ++msg)
      for (size_t field = 0; field < counts[msg]; ++field)
        measure(protocol, make_field_flip_factory(msg, field), derive_seed(0x55000, ++tag));
    measure(protocol, make_receiver_swap_factory(), derive_seed(0x55000, ++tag));
  }

  std::ostringstream oss;
  oss << accepted << "/" << total << " tampered exchanges finalized (want 0)";
  detail = oss.str();
  return accepted == 0;
}

// ---- criterion 6: the commitment scheme behaves ----------------------------

bool commitment_suite(std::string& detail) {
  auto roundtrip = [](uint64_t, uint64_t seed) {
    CommitContext ctx = CommitContext::setup(256, derive_seed(seed, 1));
    Rng rng(derive_seed(seed, 2));
    Bytes message = rng.bytes(1 + rng.below(48));
    CommitPair pair = ctx.commit(message, rng);
    auto opened = ctx.open(pair.commitment, pair.opening);
    if (!opened || *opened != message) return false;

    Bytes flipped_c = pair.commitment;
    flipped_c[rng.below(flipped_c.size())] ^= static_cast<uint8_t>(1u << rng.below(8));
    if (ctx.open(flipped_c, pair.opening).has_value()) return false;

    Opening flipped_m = pair.opening;
    flipped_m.message[rng.below(flipped_m.message.size())] ^=
        static_cast<uint8_t>(1u << rng.below(8));
    return !ctx.open(pair.commitment, flipped_m).has_value();
  };
  const uint64_t trials = 10000;
  const uint64_t good = run_trials(trials, 0x66000, roundtrip, ExecMode::parallel);

  CommitGameConfig config;
  config.security_bits = 256;
  config.trials = 10000;
  config.seed = 0x66100;
  GameResult hiding = run_hiding_game(config, make_null_hiding_adversary());
  GameResult binding = run_binding_game(config, make_null_binding_adversary());
  GameResult strong = run_strong_binding_game(config, make_null_strong_binding_adversary());
  GameResult cr = run_cr_game(config, make_null_cr_adversary());

  const bool ok = good == trials && std::abs(hiding.empirical_rate - 0.5) <= 0.02 &&
                  binding.wins == 0 && strong.wins == 0 && cr.wins == 0;
  std::ostringstream oss;
  oss << good << "/" << trials << " round-trips, null-hiding=" << hiding.empirical_rate
      << ", null binding/strong/cr wins=" << binding.wins << "/" << strong.wins << "/"
      << cr.wins;
  detail = oss.str();
  return ok;
}

// ---- criterion 7: tuple encoding is injective and bottom-absorbing ---------

bool encoding_injectivity(std::string& detail) {
  Rng rng(0x77000);
  std::map<Bytes, std::vector<Bytes>> seen;
  uint64_t collisions = 0;
  const int iterations = 100000;
  for (int i = 0; i < iterations; ++i) {
    const size_t nfields = 1 + rng.below(3);
    std::vector<FieldValue> tuple;
    std::vector<Bytes> payloads;
    for (size_t f = 0; f < nfields; ++f) {
      Bytes payload = rng.bytes(rng.below(9));
      payloads.push_back(payload);
      tuple.push_back(FieldValue::make(FieldKind::nonce, std::move(payload)));
    }
    auto encoded = encode_tuple(tuple);
    if (!encoded) return false;
    auto [it, inserted] = seen.emplace(*encoded, payloads);
    if (!inserted && it->second != payloads) ++collisions;
  }

  const bool layout =
      *enc(1, FieldValue::make(FieldKind::nonce, Bytes{0xAA})) == from_hex("0100000001aa") &&
      *encode_tuple({FieldValue::make(FieldKind::nonce, Bytes{0xAA}),
                     FieldValue::make(FieldKind::nonce, Bytes{0xBB})}) !=
          *encode_tuple({FieldValue::make(FieldKind::nonce, Bytes{0xAA, 0xBB}),
                         FieldValue::make(FieldKind::nonce, Bytes{})});
  const bool absorbing =
      !enc(1, FieldValue::bottom(FieldKind::nonce)).has_value() &&
      !encode_tuple({FieldValue::make(FieldKind::nonce, Bytes{1}),
                     FieldValue::bottom(FieldKind::nonce)})
           .has_value();

  std::ostringstream oss;
  oss << iterations << " tuples, " << collisions << " collisions; layout "
      << (layout ? "ok" : "BAD") << ", absorption " << (absorbing ? "ok" : "BAD");
  detail = oss.str();
  return collisions == 0 && layout && absorbing;
}

// ---- criterion 8: group and KEM primitives hold up under fuzz --------------

bool primitives_fuzz(std::string& detail) {
  uint64_t total = 0, good = 0;
  for (Profile profile : {Profile::toy64, Profile::standard2048}) {
    GroupParams params = GroupParams::make(profile);
    auto dh_trial = [&params](uint64_t, uint64_t seed) {
      Rng rng(seed);
      KeyPair a = ka_keygen(params, rng);
      KeyPair b = ka_keygen(params, rng);
      auto ab = ka(params, b.pk, a.sk);
      auto ba = ka(params, a.pk, b.sk);
      return ab && ba && *ab == *ba;
    };
    auto kem_trial = [&params](uint64_t, uint64_t seed) {
      OracleTable kdf(256, derive_seed(seed, 1));
      Rng rng(derive_seed(seed, 2));
      KeyPair kp = kem_keygen(params, rng);
      auto enc = kem_encaps(params, kdf, kp.pk, rng);
      if (!enc) return false;
      auto dec = kem_decaps(params, kdf, enc->ct, kp.sk);
      return dec && *dec == enc->key;
    };
    const uint64_t trials = 10000;
    good += run_trials(trials, 0x88000 + static_cast<uint64_t>(profile), dh_trial,
                       ExecMode::parallel);
    good += run_trials(trials, 0x88100 + static_cast<uint64_t>(profile), kem_trial,
                       ExecMode::parallel);
    total += 2 * trials;
  }

  GroupParams toy = GroupParams::make(Profile::toy64);
  auto dlog_trial = [&toy](uint64_t, uint64_t seed) {
    Rng rng(seed);
    KeyPair kp = ka_keygen(toy, rng);
    auto sk = brute_force_dlog(toy, kp.pk);
    return sk && *sk == kp.sk;
  };
  good += run_trials(100, 0x88200, dlog_trial, ExecMode::parallel);
  total += 100;

  std::ostringstream oss;
  oss << good << "/" << total << " primitive checks held";
  detail = oss.str();
  return good == total;
}

// ---- criterion 9: bound arithmetic is exact and monotone -------------------

bool bound_arithmetic(std::string& detail) {
  BoundParams defaults;
  bool ok = per_exchange_emulation_bound(defaults) == 3.0 / 256.0 &&
            eval_emulation_bound(defaults) == 0.046875 &&
            eval_sk_bound(0.125, 0.03125, SkRule::theorem) == 0.15625 &&
            eval_sk_bound(0.125, 0.03125, SkRule::proposition) == 0.1875;

  Rng rng(0x99000);
  for (int i = 0; i < 200 && ok; ++i) {
    BoundParams base;
    base.av_bits = 1 + static_cast<unsigned>(rng.below(24));
    base.oracle_queries = rng.below(1 << 14);
    base.adv_hiding = static_cast<double>(rng.below(1000)) / 1000.0;
    base.adv_binding = static_cast<double>(rng.below(1000)) / 1000.0;
    base.adv_strong_binding = static_cast<double>(rng.below(1000)) / 1000.0;
    base.adv_cr = static_cast<double>(rng.below(1000)) / 1000.0;
    const double reference = per_exchange_emulation_bound(base);

    BoundParams more_queries = base;
    more_queries.oracle_queries += 1;
    BoundParams wider = base;
    wider.av_bits += 1;
    ok = per_exchange_emulation_bound(more_queries) >= reference &&
         per_exchange_emulation_bound(wider) <= reference;
  }

  detail = ok ? "exact values and monotonicity hold" : "arithmetic check failed";
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"honest-completeness", honest_completeness},
      {"two-pass-attack-curves", attack_curves},
      {"collision-game", collision_game},
      {"emulation-games", emulation_games},
      {"tamper-rejection", tamper_rejection},
      {"commitment-suite", commitment_suite},
      {"encoding-injectivity", encoding_injectivity},
      {"primitives-fuzz", primitives_fuzz},
      {"bound-arithmetic", bound_arithmetic},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
      pass = criteria[i].run(detail);
    } catch (const std::exception& err) {
      detail = std::string("exception: ") + err.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%zu/%zu] %s %s: %s (%.2fs)\n", i + 1, criteria.size(),
                pass ? "PASS" : "FAIL", criteria[i].name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
  }

  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d of %zu acceptance criteria FAILED\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
