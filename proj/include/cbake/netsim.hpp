// Message-scheduling layer: runs one initiator/responder pair over a channel
// controlled by an adversary callback, records everything that happened, and
// aggregates many such exchanges into campaigns.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cbake/protocol.hpp"
#include "cbake/trial_runner.hpp"

namespace cbake {

// am: authenticated channel — the scheduler refuses any adversary action other
// than faithful delivery. um: unauthenticated — the adversary may rewrite,
// drop, or add traffic.
enum class NetMode { am, um };

const char* net_mode_name(NetMode mode);

enum class ActionKind { deliver, modify, drop, inject };

struct AdversaryAction {
  ActionKind kind = ActionKind::deliver;
  // modify: delivered instead of the in-flight message.
  std::optional<ProtocolMessage> replacement;
  // inject: queued after the in-flight message is delivered.
  std::optional<ProtocolMessage> extra;

  static AdversaryAction deliver() { return {}; }
  static AdversaryAction drop() { return {ActionKind::drop, std::nullopt, std::nullopt}; }
  static AdversaryAction modify(ProtocolMessage replacement) {
    return {ActionKind::modify, std::move(replacement), std::nullopt};
  }
  static AdversaryAction inject(ProtocolMessage extra) {
    return {ActionKind::inject, std::nullopt, std::move(extra)};
  }
};

// What the adversary sees per in-flight message. av is the only sanctioned
// path to the short-digest oracle and is metered; grinding stops once the
// budget runs out.
struct AdversaryView {
  const ProtocolMessage& in_flight;
  ProtocolEnv& env;
  BudgetedOracle& av;
  Rng& rng;
};

using Adversary = std::function<AdversaryAction(AdversaryView&)>;

// Campaigns run exchanges concurrently, so each exchange gets a fresh
// adversary instance; stateful attackers keep their state inside the closure.
using AdversaryFactory = std::function<Adversary(uint64_t exchange_seed)>;

struct EventRecord {
  int step = 0;
  std::string actor;     // "adversary" or "network"
  std::string action;    // deliver | modify | drop | inject | unroutable
  std::string message;   // wire-type name
  size_t byte_len = 0;
  std::string note;

  std::string to_line() const;  // single-line JSON
};

struct ExchangeRecord {
  uint64_t index = 0;
  uint64_t seed = 0;
  Protocol protocol = Protocol::ka3;
  PartyId initiator;
  PartyId responder;
  PartyId intended_peer;  // whom the initiator believes it is talking to

  bool started = false;
  Bytes started_content;      // initiator's request summary
  bool validated = false;
  PartyId validated_sender;   // whom the responder believes it heard from
  Bytes validated_content;    // responder's validated request summary

  bool finalize_accept = false;
  SessionOutput initiator_output;
  SessionOutput responder_output;

  std::vector<ProtocolMessage> delivered;
  std::vector<EventRecord> log;
  uint64_t adversary_queries = 0;
};

struct ExchangeSetup {
  Protocol protocol = Protocol::ka3;
  PartyId initiator;
  PartyId responder;
  // Defaults to responder; set differently to model a misdirected request.
  std::optional<PartyId> intended_peer;
  EnvConfig env;
  NetMode mode = NetMode::um;
  uint64_t seed = 1;
  uint64_t query_limit = 0;  // adversary digest-oracle budget; 0 = none
};

// Drives one exchange to quiescence. Throws std::invalid_argument if the
// adversary deviates from plain delivery while mode == am.
ExchangeRecord run_exchange(const ExchangeSetup& setup, const Adversary& adversary);

// True when the responder validated a request that no party actually issued:
// it accepted and finalization passed, yet (sender, receiver, content) do not
// match what the initiator sent.
bool detect_emulation_break(const ExchangeRecord& record);

// Every message the adversary saw was either delivered (possibly rewritten),
// dropped, or bounced as unroutable — nothing vanished from the log.
bool log_conserves_messages(const ExchangeRecord& record);

Adversary make_passthrough_adversary();
AdversaryFactory make_passthrough_factory();
AdversaryFactory make_drop_all_factory();
// Man-in-the-middle that re-commits to its own contribution and swaps its own
// opening in, so the responder validates attacker-chosen content. Succeeds
// only when the two short digests collide.
AdversaryFactory make_substitution_factory(Protocol protocol);

struct CampaignSummary {
  uint64_t slots = 0;   // ordered party pairs (self-pairs included) x repeats
  uint64_t breaks = 0;
  double break_rate = 0.0;
  double per_exchange_bound = 0.0;
  double union_bound = 0.0;  // slots x per-exchange, clamped to 1
};

struct CampaignConfig {
  Protocol protocol = Protocol::ka3;
  size_t n_parties = 2;
  size_t exchanges_per_pair = 1;
  EnvConfig env;
  NetMode mode = NetMode::um;
  uint64_t seed = 1;
  uint64_t query_limit = 0;
  ExecMode exec = ExecMode::parallel;
  double per_exchange_bound = 0.0;
};

// Runs every ordered pair (including a party with itself) exchanges_per_pair
// times. If records is non-null it is resized to one entry per slot.
CampaignSummary run_campaign(const CampaignConfig& config, const AdversaryFactory& factory,
                             std::vector<ExchangeRecord>* records = nullptr);

}  // namespace cbake
