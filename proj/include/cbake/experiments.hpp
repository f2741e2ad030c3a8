// Measurement harnesses: closed-form bound arithmetic, the digest-collision
// game, a full man-in-the-middle attack on the two-pass flows, and the
// three-phase emulation games for the three-pass flows, each run over many
// seeded trials and summarized against a reference value.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cbake/netsim.hpp"

namespace cbake {

// ----- bound arithmetic ---------------------------------------------------

struct BoundParams {
  unsigned av_bits = 8;          // digest-oracle output width
  uint64_t oracle_queries = 0;   // adversary budget against that oracle
  uint64_t n_parties = 2;
  uint64_t exchanges_per_party = 1;
  double adv_hiding = 0.0;
  double adv_binding = 0.0;
  double adv_strong_binding = 0.0;
  double adv_cr = 0.0;
};

// Failure bound for a single exchange:
//   3/2^n + (q/2^n) * ((1 + hiding*cr) * hiding + 2*binding + strong_binding)
double per_exchange_emulation_bound(const BoundParams& params);

// Union over all n_parties^2 * exchanges_per_party slots.
double eval_emulation_bound(const BoundParams& params);

// Session-key security carried from the authenticated to the unauthenticated
// setting: the generic composition adds the emulation slack once; the
// protocol-specific statements add it twice. Both are exposed so the gap is
// measurable.
enum class SkRule { theorem, proposition };
double eval_sk_bound(double epsilon, double alpha, SkRule rule);

// ----- experiment reports -------------------------------------------------

enum class CheckKind { two_sided, upper_bound, exact_zero };

const char* check_kind_name(CheckKind check);

struct ExperimentReport {
  std::string name;
  uint64_t trials = 0;
  uint64_t wins = 0;
  double empirical_rate = 0.0;
  double std_err = 0.0;
  double reference_value = 0.0;
  double tolerance = 0.0;
  CheckKind check = CheckKind::two_sided;
  bool pass = false;

  std::string to_line() const;  // single-line JSON
};

ExperimentReport make_report(std::string name, uint64_t trials, uint64_t wins, double reference,
                             double tolerance, CheckKind check);

// ----- digest-collision game ----------------------------------------------

// A random l-bit target is drawn; the adversary makes `draws` attempts at a
// sampler that yields a fresh candidate with probability delta, tests each
// candidate against the target, and wins on any hit.
struct CollisionConfig {
  unsigned l_bits = 8;
  uint64_t draws = 16;
  double delta = 1.0;
  uint64_t trials = 10000;
  uint64_t seed = 1;
  double tolerance = 0.02;
  ExecMode mode = ExecMode::parallel;
};

// Exact success probability: 1 - (1 - delta/2^l)^draws.
double collision_closed_form(unsigned l_bits, uint64_t draws, double delta = 1.0);
// Published cap: draws * delta / 2^l.
double collision_bound(unsigned l_bits, uint64_t draws, double delta);

ExperimentReport run_combined_collision(const CollisionConfig& config);

// ----- two-pass man-in-the-middle attack ----------------------------------

// The attacker swaps its own key into the first message, learns the target
// digest after the responder's reply, then grinds up to `queries` candidate
// replies for the initiator looking for a digest match. A win requires the
// out-of-band comparison to pass while the attacker holds both session keys.
struct TwoPassAttackConfig {
  Protocol protocol = Protocol::ka2;  // ka2 or kem2
  Profile profile = Profile::toy64;
  unsigned av_bits = 8;
  uint64_t queries = 64;
  uint64_t trials = 10000;
  uint64_t seed = 1;
  double tolerance = 0.02;
  ExecMode mode = ExecMode::parallel;
};

// queries >= 1: 1 - (1 - 2^-l)^queries; queries == 0 degenerates to one
// untested guess, 2^-l.
double two_pass_success_closed_form(unsigned av_bits, uint64_t queries);

ExperimentReport run_two_pass_attack(const TwoPassAttackConfig& config);

// ----- three-pass emulation games -----------------------------------------

// Variant av is the full game: the adversary also chooses the opening the
// responder checks. Variant zero pins that opening to the honest one; variant
// one additionally removes the adversary's control of the second message.
enum class GameVariant { av, zero, one };

const char* game_variant_name(GameVariant variant);

struct GameConfig {
  GameVariant variant = GameVariant::av;
  EnvConfig env;              // av_bits, commit_bits, nonce_bits, profile
  uint64_t query_limit = 0;   // adversary digest-oracle budget
  uint64_t trials = 1;
  uint64_t seed = 1;
  ExecMode mode = ExecMode::parallel;
};

// State handed to each adversary phase. Fields engage as the game progresses;
// a phase may rely on everything the challenger has revealed so far,
// including the adversary's own earlier outputs.
struct KaGameView {
  ProtocolEnv& env;
  BudgetedOracle& oracle;  // metered digest-oracle access
  Rng& rng;
  PartyId receiver{};       // intended receiver
  Bytes c{};                // honest commitment to the initiator key
  PartyId receiver_star{};
  Bytes c_star{};
  Opening d_star{};
  Bytes pk_responder{};      // engaged before phase 2
  Bytes pk_responder_star{}; // engaged before phase 3
  Opening d{};               // honest opening, engaged before phase 3
};

struct KaPhase1Result {
  PartyId receiver_star;
  Bytes c_star;
  Opening d_star;
};

struct KaGameAdversary {
  std::function<KaPhase1Result(KaGameView&)> phase1;
  std::function<Bytes(KaGameView&)> phase2;    // substituted responder key
  std::function<Opening(KaGameView&)> phase3;  // substituted opening
};

struct KemGameView {
  ProtocolEnv& env;
  BudgetedOracle& oracle;
  Rng& rng;
  PartyId receiver{};
  Bytes c{};    // honest commitment to the nonce
  Bytes pk{};   // initiator public key
  PartyId receiver_star{};
  Bytes c_star{};
  Opening d_star{};
  Bytes pk_star{};
  Bytes ct{};       // honest encapsulation against pk_star, engaged before phase 2
  Bytes ct_star{};  // engaged before phase 3
  Opening d{};      // honest opening, engaged before phase 3
};

struct KemPhase1Result {
  PartyId receiver_star;
  Bytes c_star;
  Opening d_star;
  Bytes pk_star;
};

struct KemGameAdversary {
  std::function<KemPhase1Result(KemGameView&)> phase1;
  std::function<Bytes(KemGameView&)> phase2;   // substituted encapsulation
  std::function<Opening(KemGameView&)> phase3; // substituted opening
};

// Play the game config.trials times. If trace is non-null the run is forced
// serial and the challenger's step labels for the first trial are appended to
// it, so tests can pin the exact step sequence of each variant. Throws
// std::invalid_argument if a phase-1 adversary hands back a public key the
// encapsulation step rejects.
GameResult run_ka_game(const GameConfig& config, const KaGameAdversary& adversary,
                       std::vector<std::string>* trace = nullptr);
GameResult run_kem_game(const GameConfig& config, const KemGameAdversary& adversary,
                        std::vector<std::string>* trace = nullptr);

// Built-in strategies. identity echoes every honest value and never wins (the
// freshness side condition fails). The substitution families replace exactly
// one slot and win only on digest collisions. oracle_search hunts a second
// opening of the honest commitment (a strong-binding break), which wins the
// full game outright when the commitment is weak enough to crack; against a
// full-width commitment the scan gives up and plays like identity.
KaGameAdversary make_ka_identity_adversary();
KaGameAdversary make_ka_commit_substitution_adversary();
KaGameAdversary make_ka_responder_key_substitution_adversary();
KaGameAdversary make_ka_receiver_substitution_adversary();
KaGameAdversary make_ka_oracle_search_adversary(uint64_t scan_cap = 4096);

KemGameAdversary make_kem_identity_adversary();
KemGameAdversary make_kem_commit_substitution_adversary();
KemGameAdversary make_kem_encap_substitution_adversary();
KemGameAdversary make_kem_receiver_substitution_adversary();
KemGameAdversary make_kem_oracle_search_adversary(uint64_t scan_cap = 4096);

}  // namespace cbake
