#pragma once

#include <functional>
#include <tuple>
#include <utility>

#include "cbake/encoding.hpp"
#include "cbake/oracle.hpp"
#include "cbake/rng.hpp"
#include "cbake/trial_runner.hpp"

namespace cbake {

// (randomness, message) pair that opens a commitment.
struct Opening {
  Bytes randomness;
  Bytes message;
  bool operator==(const Opening&) const = default;
};

struct CommitPair {
  Bytes commitment;
  Opening opening;
};

// Oracle-backed commitment scheme: c = RO(TLV(r, m)). Open recomputes the
// digest and never inspects anything beyond that.
class CommitContext {
 public:
  // security_bits sets the randomness width; the oracle digest is at least
  // one byte wide. The default 256-bit setup is effectively unbreakable at
  // desk scale; tiny widths exist so the game harnesses can show wins.
  static CommitContext setup(unsigned security_bits, uint64_t seed);

  // Fresh context with the same parameters but new key material and oracle.
  CommitContext resetup(uint64_t seed) const { return setup(security_bits_, seed); }

  CommitPair commit(const Bytes& message, Rng& rng);
  std::optional<Bytes> open(const Bytes& commitment, const Opening& opening);

  // Digest for an explicit opening; what commit/open both evaluate.
  Bytes digest(const Opening& opening);

  const Bytes& commit_key() const { return commit_key_; }
  unsigned security_bits() const { return security_bits_; }
  unsigned randomness_bits() const { return randomness_bits_; }
  size_t randomness_bytes() const { return (randomness_bits_ + 7) / 8; }
  OracleTable& oracle() { return oracle_; }

 private:
  CommitContext(unsigned security_bits, Bytes key, OracleTable oracle);

  unsigned security_bits_;
  unsigned randomness_bits_;
  Bytes commit_key_;
  OracleTable oracle_;
};

// Aggregated outcome of repeated security-game executions.
struct GameResult {
  uint64_t trials = 0;
  uint64_t wins = 0;
  bool won = false;  // at least one win observed
  double empirical_rate = 0.0;
  double std_err = 0.0;  // binomial standard error of empirical_rate
};

GameResult make_game_result(uint64_t trials, uint64_t wins);

// Adversaries run against a fresh per-trial context and query the commit
// oracle through a metered budget.

struct HidingAdversary {
  // Picks the two candidate messages; they must differ or the harness
  // rejects the adversary as malformed.
  std::function<std::pair<Bytes, Bytes>(CommitContext&, BudgetedOracle&, Rng&)> choose;
  // Guesses which message the challenge commitment hides.
  std::function<int(CommitContext&, BudgetedOracle&, const Bytes& commitment, Rng&)> guess;
};

// Outputs (c, d, d'); wins when the two openings reveal different defined
// messages under the same commitment.
struct BindingAdversary {
  std::function<std::tuple<Bytes, Opening, Opening>(CommitContext&, BudgetedOracle&, Rng&)> run;
};

// Outputs (c, d, d'); wins when both openings reveal the same defined
// message but the openings differ.
struct StrongBindingAdversary {
  std::function<std::tuple<Bytes, Opening, Opening>(CommitContext&, BudgetedOracle&, Rng&)> run;
};

// Outputs (c, c', d); wins when d opens both commitments to defined
// messages while c != c'.
struct CrAdversary {
  std::function<std::tuple<Bytes, Bytes, Opening>(CommitContext&, BudgetedOracle&, Rng&)> run;
};

struct CommitGameConfig {
  unsigned security_bits = 256;
  uint64_t query_limit = 0;
  uint64_t trials = 1;
  uint64_t seed = 1;
  ExecMode mode = ExecMode::parallel;
};

GameResult run_hiding_game(const CommitGameConfig&, const HidingAdversary&);
GameResult run_binding_game(const CommitGameConfig&, const BindingAdversary&);
GameResult run_strong_binding_game(const CommitGameConfig&, const StrongBindingAdversary&);
GameResult run_cr_game(const CommitGameConfig&, const CrAdversary&);

// Built-in adversaries. "Null" ones play honestly and set the zero-advantage
// baseline; "search" ones spend their budget brute-forcing openings and only
// win measurably at toy widths.
HidingAdversary make_null_hiding_adversary();
HidingAdversary make_search_hiding_adversary();
BindingAdversary make_null_binding_adversary();
BindingAdversary make_search_binding_adversary();
StrongBindingAdversary make_null_strong_binding_adversary();
StrongBindingAdversary make_search_strong_binding_adversary();
CrAdversary make_null_cr_adversary();
CrAdversary make_search_cr_adversary();

}  // namespace cbake
