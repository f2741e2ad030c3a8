#include "cbake/netsim.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <stdexcept>

#include "json.hpp"

namespace cbake {

const char* net_mode_name(NetMode mode) {
  return mode == NetMode::am ? "am" : "um";
}

std::string EventRecord::to_line() const {
  nlohmann::json line{{"step", step},     {"actor", actor},       {"action", action},
                      {"message", message}, {"bytes", byte_len},  {"note", note}};
  return line.dump();
}

namespace {

const char* action_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::deliver: return "deliver";
    case ActionKind::modify: return "modify";
    case ActionKind::drop: return "drop";
    case ActionKind::inject: return "inject";
  }
  return "?";
}

// Wire direction is a property of the message type; routing demands that the
// receiver id matches the party at that end. A party talking to itself still
// gets deterministic routing this way.
bool flows_to_responder(MsgType type) {
  switch (type) {
    case MsgType::ka2_key:
    case MsgType::kem2_key:
    case MsgType::ka3_commit:
    case MsgType::kem3_commit:
    case MsgType::ka3_open:
    case MsgType::kem3_open:
      return true;
    case MsgType::ka2_reply:
    case MsgType::kem2_ct:
    case MsgType::ka3_reply:
    case MsgType::kem3_ct:
      return false;
  }
  return false;
}

}  // namespace

ExchangeRecord run_exchange(const ExchangeSetup& setup, const Adversary& adversary) {
  ExchangeRecord rec;
  rec.seed = setup.seed;
  rec.protocol = setup.protocol;
  rec.initiator = setup.initiator;
  rec.responder = setup.responder;
  rec.intended_peer = setup.intended_peer.value_or(setup.responder);

  ProtocolEnv env = ProtocolEnv::make(setup.env, derive_seed(setup.seed, 1));
  Rng rng_init(derive_seed(setup.seed, 2));
  Rng rng_resp(derive_seed(setup.seed, 3));
  Rng rng_adv(derive_seed(setup.seed, 4));
  Bytes session_id = Rng(derive_seed(setup.seed, 5)).bytes(8);

  Session initiator =
      Session::make_initiator(setup.protocol, setup.initiator, rec.intended_peer, session_id);
  Session responder = Session::make_responder(setup.protocol, setup.responder, session_id);

  QueryBudget budget{setup.query_limit, 0};
  BudgetedOracle adversary_oracle(env.av_oracle, budget);

  std::deque<ProtocolMessage> wire;
  wire.push_back(initiator.start(env, rng_init));
  rec.started = true;
  rec.started_content = *initiator.request_content();

  int step = 0;
  auto deliver = [&](const ProtocolMessage& msg) {
    Session* target = nullptr;
    const char* note = "";
    if (flows_to_responder(msg.type)) {
      if (msg.receiver == setup.responder) target = &responder, note = "to responder";
    } else {
      if (msg.receiver == setup.initiator) target = &initiator, note = "to initiator";
    }
    if (target == nullptr) {
      rec.log.push_back(
          {step, "network", "unroutable", msg_type_name(msg.type), msg.serialize().size(), ""});
      return;
    }
    rec.delivered.push_back(msg);
    rec.log.push_back(
        {step, "network", "deliver", msg_type_name(msg.type), msg.serialize().size(), note});
    auto reply = target->on_message(msg, env, target == &initiator ? rng_init : rng_resp);
    if (reply) wire.push_back(std::move(*reply));
  };

  constexpr int kMaxTransits = 64;  // far above any honest or built-in flow
  while (!wire.empty() && step < kMaxTransits) {
    ProtocolMessage msg = std::move(wire.front());
    wire.pop_front();
    ++step;

    AdversaryView view{msg, env, adversary_oracle, rng_adv};
    AdversaryAction action = adversary(view);
    if (setup.mode == NetMode::am && action.kind != ActionKind::deliver)
      throw std::invalid_argument("authenticated channel: adversary may only deliver");

    rec.log.push_back({step, "adversary", action_name(action.kind), msg_type_name(msg.type),
                       msg.serialize().size(), ""});

    if (action.kind == ActionKind::drop) continue;
    if (action.kind == ActionKind::inject && action.extra) wire.push_back(*action.extra);
    const ProtocolMessage& out =
        (action.kind == ActionKind::modify && action.replacement) ? *action.replacement : msg;
    deliver(out);
  }

  rec.initiator_output = initiator.output();
  rec.responder_output = responder.output();
  rec.validated = responder.output().status == SessionStatus::accepted &&
                  responder.request_content().has_value();
  if (rec.validated) {
    rec.validated_sender = responder.output().peer;
    rec.validated_content = *responder.request_content();
  }
  rec.finalize_accept = finalize_if(initiator.output(), responder.output());
  rec.adversary_queries = budget.used;
  return rec;
}

bool detect_emulation_break(const ExchangeRecord& record) {
  if (!record.validated || !record.finalize_accept) return false;
  const bool honest_match = record.started && record.validated_sender == record.initiator &&
                            record.intended_peer == record.responder &&
                            record.validated_content == record.started_content;
  return !honest_match;
}

bool log_conserves_messages(const ExchangeRecord& record) {
  uint64_t seen = 0, dropped = 0, settled = 0;
  for (const EventRecord& event : record.log) {
    if (event.actor == "adversary") {
      ++seen;
      if (event.action == "drop") ++dropped;
    } else if (event.actor == "network") {
      ++settled;  // delivered or bounced as unroutable
    }
  }
  return settled == seen - dropped;
}

Adversary make_passthrough_adversary() {
  return [](AdversaryView&) { return AdversaryAction::deliver(); };
}

AdversaryFactory make_passthrough_factory() {
  return [](uint64_t) { return make_passthrough_adversary(); };
}

AdversaryFactory make_drop_all_factory() {
  return [](uint64_t) {
    return [](AdversaryView&) { return AdversaryAction::drop(); };
  };
}

AdversaryFactory make_substitution_factory(Protocol protocol) {
  return [protocol](uint64_t) -> Adversary {
    struct State {
      std::optional<KeyPair> keypair;
      std::optional<CommitPair> commit;
    };
    auto state = std::make_shared<State>();
    return [protocol, state](AdversaryView& view) -> AdversaryAction {
      ProtocolMessage msg = view.in_flight;
      switch (msg.type) {
        case MsgType::ka2_key:
          state->keypair = ka_keygen(view.env.params, view.rng);
          msg.fields[0] = state->keypair->pk;
          return AdversaryAction::modify(std::move(msg));
        case MsgType::kem2_key:
          state->keypair = kem_keygen(view.env.params, view.rng);
          msg.fields[0] = state->keypair->pk;
          return AdversaryAction::modify(std::move(msg));
        case MsgType::ka3_commit:
          state->keypair = ka_keygen(view.env.params, view.rng);
          state->commit =
              view.env.commit.commit(wrap_committed(state->keypair->pk), view.rng);
          msg.fields[0] = state->commit->commitment;
          return AdversaryAction::modify(std::move(msg));
        case MsgType::kem3_commit: {
          state->keypair = kem_keygen(view.env.params, view.rng);
          Bytes nonce = view.rng.bits(view.env.config.nonce_bits);
          state->commit = view.env.commit.commit(wrap_committed(nonce), view.rng);
          msg.fields[0] = state->commit->commitment;
          msg.fields[1] = state->keypair->pk;
          return AdversaryAction::modify(std::move(msg));
        }
        case MsgType::ka3_open:
        case MsgType::kem3_open:
          if (!state->commit) return AdversaryAction::deliver();
          msg.fields[0] = state->commit->opening.randomness;
          msg.fields[1] = state->commit->opening.message;
          return AdversaryAction::modify(std::move(msg));
        default:
          return AdversaryAction::deliver();
      }
    };
  };
}

CampaignSummary run_campaign(const CampaignConfig& config, const AdversaryFactory& factory,
                             std::vector<ExchangeRecord>* records) {
  const uint64_t slots = static_cast<uint64_t>(config.n_parties) * config.n_parties *
                         config.exchanges_per_pair;
  if (records) records->assign(slots, ExchangeRecord{});

  auto trial = [&](uint64_t index, uint64_t seed) {
    const uint64_t pair = index / config.exchanges_per_pair;
    const size_t from = static_cast<size_t>(pair / config.n_parties);
    const size_t to = static_cast<size_t>(pair % config.n_parties);
    ExchangeSetup setup;
    setup.protocol = config.protocol;
    setup.initiator = PartyId::from_index(from);
    setup.responder = PartyId::from_index(to);
    setup.env = config.env;
    setup.mode = config.mode;
    setup.seed = seed;
    setup.query_limit = config.query_limit;
    ExchangeRecord rec = run_exchange(setup, factory(seed));
    rec.index = index;
    const bool broke = detect_emulation_break(rec);
    if (records) (*records)[index] = std::move(rec);
    return broke;
  };

  CampaignSummary summary;
  summary.slots = slots;
  summary.breaks = run_trials(slots, config.seed, trial, config.exec);
  summary.break_rate = slots == 0 ? 0.0 : static_cast<double>(summary.breaks) / slots;
  summary.per_exchange_bound = config.per_exchange_bound;
  summary.union_bound = std::min(1.0, static_cast<double>(slots) * config.per_exchange_bound);
  return summary;
}

}  // namespace cbake
