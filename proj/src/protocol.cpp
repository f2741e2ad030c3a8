#include "cbake/protocol.hpp"

#include <cassert>
#include <stdexcept>

namespace cbake {

bool is_two_pass(Protocol protocol) {
  return protocol == Protocol::ka2 || protocol == Protocol::kem2;
}

const char* protocol_name(Protocol protocol) {
  switch (protocol) {
    case Protocol::ka2: return "ka2";
    case Protocol::kem2: return "kem2";
    case Protocol::ka3: return "ka3";
    case Protocol::kem3: return "kem3";
  }
  return "?";
}

std::optional<Protocol> protocol_from_name(std::string_view name) {
  if (name == "ka2") return Protocol::ka2;
  if (name == "kem2") return Protocol::kem2;
  if (name == "ka3") return Protocol::ka3;
  if (name == "kem3") return Protocol::kem3;
  return std::nullopt;
}

const char* msg_type_name(MsgType type) {
  switch (type) {
    case MsgType::ka2_key: return "ka2_key";
    case MsgType::ka2_reply: return "ka2_reply";
    case MsgType::kem2_key: return "kem2_key";
    case MsgType::kem2_ct: return "kem2_ct";
    case MsgType::ka3_commit: return "ka3_commit";
    case MsgType::ka3_reply: return "ka3_reply";
    case MsgType::ka3_open: return "ka3_open";
    case MsgType::kem3_commit: return "kem3_commit";
    case MsgType::kem3_ct: return "kem3_ct";
    case MsgType::kem3_open: return "kem3_open";
  }
  return "?";
}

size_t msg_field_count(MsgType type) {
  switch (type) {
    case MsgType::ka2_key:
    case MsgType::ka2_reply:
    case MsgType::kem2_key:
    case MsgType::kem2_ct:
    case MsgType::ka3_commit:
    case MsgType::ka3_reply:
    case MsgType::kem3_ct:
      return 1;
    case MsgType::kem3_commit:
    case MsgType::ka3_open:
    case MsgType::kem3_open:
      return 2;
  }
  return 0;
}

namespace {

bool known_msg_type(uint8_t tag) {
  switch (static_cast<MsgType>(tag)) {
    case MsgType::ka2_key:
    case MsgType::ka2_reply:
    case MsgType::kem2_key:
    case MsgType::kem2_ct:
    case MsgType::ka3_commit:
    case MsgType::ka3_reply:
    case MsgType::ka3_open:
    case MsgType::kem3_commit:
    case MsgType::kem3_ct:
    case MsgType::kem3_open:
      return true;
  }
  return false;
}

}  // namespace

Bytes ProtocolMessage::serialize() const {
  Bytes out;
  out.push_back(static_cast<uint8_t>(type));
  append_tlv(out, 1, sender.bytes());
  append_tlv(out, 2, receiver.bytes());
  append_tlv(out, 3, session);
  for (size_t i = 0; i < fields.size(); ++i)
    append_tlv(out, static_cast<unsigned>(4 + i), fields[i]);
  return out;
}

std::optional<ProtocolMessage> ProtocolMessage::parse(const Bytes& wire) {
  if (wire.empty() || !known_msg_type(wire[0])) return std::nullopt;
  ProtocolMessage msg;
  msg.type = static_cast<MsgType>(wire[0]);
  size_t pos = 1;
  auto sender = read_tlv(wire, pos, 1);
  auto receiver = read_tlv(wire, pos, 2);
  auto session = read_tlv(wire, pos, 3);
  if (!sender || !receiver || !session) return std::nullopt;
  if (sender->size() != PartyId::kWidth || receiver->size() != PartyId::kWidth)
    return std::nullopt;
  msg.sender = PartyId::from_bytes(*sender);
  msg.receiver = PartyId::from_bytes(*receiver);
  msg.session = std::move(*session);
  for (size_t i = 0; i < msg_field_count(msg.type); ++i) {
    auto field = read_tlv(wire, pos, static_cast<unsigned>(4 + i));
    if (!field) return std::nullopt;
    msg.fields.push_back(std::move(*field));
  }
  if (pos != wire.size()) return std::nullopt;  // trailing bytes
  return msg;
}

ProtocolEnv ProtocolEnv::make(const EnvConfig& config, uint64_t seed) {
  return ProtocolEnv{
      config,
      GroupParams::make(config.profile),
      CommitContext::setup(config.commit_bits, derive_seed(seed, 1)),
      OracleTable(config.av_bits, derive_seed(seed, 2)),
      OracleTable(config.kdf_bits, derive_seed(seed, 3)),
  };
}

bool finalize_if(const SessionOutput& a, const SessionOutput& b) {
  if (a.status != SessionStatus::accepted || b.status != SessionStatus::accepted) return false;
  if (!a.av.has_value() || !b.av.has_value()) return false;
  return *a.av == *b.av;
}

Session::Session(Protocol protocol, Role role, PartyId self, PartyId peer, Bytes session_id)
    : protocol_(protocol), role_(role), self_(self), session_id_(std::move(session_id)) {
  output_.self = self;
  output_.peer = peer;
  output_.role = role;
}

Session Session::make_initiator(Protocol protocol, PartyId self, PartyId peer, Bytes session_id) {
  return Session(protocol, Role::initiator, self, peer, std::move(session_id));
}

Session Session::make_responder(Protocol protocol, PartyId self, Bytes session_id) {
  return Session(protocol, Role::responder, self, PartyId{}, std::move(session_id));
}

std::optional<ProtocolMessage> Session::abort() {
  output_.status = SessionStatus::aborted;
  output_.key.reset();
  output_.av.reset();
  return std::nullopt;
}

void Session::accept(Bytes key, AvValue av) {
  assert(av.has_value());
  output_.status = SessionStatus::accepted;
  output_.key = std::move(key);
  output_.av = std::move(av);
}

ProtocolMessage Session::outbound(MsgType type, std::vector<Bytes> fields) const {
  ProtocolMessage msg;
  msg.type = type;
  msg.sender = self_;
  msg.receiver = output_.peer;
  msg.session = session_id_;
  msg.fields = std::move(fields);
  return msg;
}

bool Session::envelope_ok(const ProtocolMessage& msg, MsgType expected) const {
  if (msg.type != expected) return false;
  if (msg.receiver != self_) return false;
  if (msg.session != session_id_) return false;
  if (msg.fields.size() != msg_field_count(msg.type)) return false;
  return true;
}

namespace {

std::vector<FieldKind> av_slot_kinds(Protocol protocol) {
  switch (protocol) {
    case Protocol::ka2: return {FieldKind::public_key, FieldKind::public_key};
    case Protocol::kem2: return {FieldKind::public_key, FieldKind::ciphertext};
    case Protocol::ka3:
      return {FieldKind::commitment, FieldKind::public_key, FieldKind::public_key};
    case Protocol::kem3:
      return {FieldKind::commitment, FieldKind::public_key, FieldKind::nonce,
              FieldKind::ciphertext};
  }
  return {};
}

}  // namespace

std::vector<FieldValue> av_tuple(Protocol protocol, const PartyId& receiver,
                                 const std::vector<std::optional<Bytes>>& values) {
  const std::vector<FieldKind> kinds = av_slot_kinds(protocol);
  if (values.size() != kinds.size())
    throw std::invalid_argument("digest tuple has the wrong number of slots");
  std::vector<FieldValue> tuple;
  tuple.reserve(kinds.size() + 1);
  tuple.push_back(FieldValue::make(FieldKind::party_id, receiver.bytes()));
  for (size_t i = 0; i < kinds.size(); ++i)
    tuple.push_back(values[i] ? FieldValue::make(kinds[i], *values[i])
                              : FieldValue::bottom(kinds[i]));
  return tuple;
}

AvValue Session::transcript_av(Protocol protocol, OracleTable& av_oracle,
                               const PartyId& receiver, const std::vector<Bytes>& fields) {
  std::vector<std::optional<Bytes>> values(fields.begin(), fields.end());
  return compute_av(av_oracle, av_tuple(protocol, receiver, values));
}

Bytes wrap_committed(const Bytes& value) {
  Bytes out;
  append_tlv(out, 1, value);
  return out;
}

std::optional<Bytes> unwrap_committed(const Bytes& wrapped) {
  size_t pos = 0;
  auto value = read_tlv(wrapped, pos, 1);
  if (!value || pos != wrapped.size()) return std::nullopt;
  return value;
}

namespace {

Bytes tlv_request(const std::vector<Bytes>& parts) {
  Bytes out;
  for (size_t i = 0; i < parts.size(); ++i) append_tlv(out, static_cast<unsigned>(i + 1), parts[i]);
  return out;
}

}  // namespace

ProtocolMessage Session::start(ProtocolEnv& env, Rng& rng) {
  if (role_ != Role::initiator || step_ != 0 || output_.status != SessionStatus::running)
    throw std::logic_error("start() is only valid once, on a fresh initiator");
  step_ = 1;
  switch (protocol_) {
    case Protocol::ka2: {
      keypair_ = ka_keygen(env.params, rng);
      request_content_ = tlv_request({keypair_->pk});
      return outbound(MsgType::ka2_key, {keypair_->pk});
    }
    case Protocol::kem2: {
      keypair_ = kem_keygen(env.params, rng);
      request_content_ = tlv_request({keypair_->pk});
      return outbound(MsgType::kem2_key, {keypair_->pk});
    }
    case Protocol::ka3: {
      keypair_ = ka_keygen(env.params, rng);
      commit_pair_ = env.commit.commit(wrap_committed(keypair_->pk), rng);
      request_content_ = tlv_request({keypair_->pk});
      return outbound(MsgType::ka3_commit, {commit_pair_->commitment});
    }
    case Protocol::kem3: {
      keypair_ = kem_keygen(env.params, rng);
      nonce_ = rng.bits(env.config.nonce_bits);
      commit_pair_ = env.commit.commit(wrap_committed(*nonce_), rng);
      request_content_ = tlv_request({keypair_->pk, *nonce_});
      return outbound(MsgType::kem3_commit, {commit_pair_->commitment, keypair_->pk});
    }
  }
  throw std::logic_error("unreachable");
}

std::optional<ProtocolMessage> Session::on_message(const ProtocolMessage& msg, ProtocolEnv& env,
                                                   Rng& rng) {
  if (output_.status != SessionStatus::running) return std::nullopt;  // terminal: ignore
  return role_ == Role::initiator ? initiator_step(msg, env, rng)
                                  : responder_step(msg, env, rng);
}

std::optional<ProtocolMessage> Session::initiator_step(const ProtocolMessage& msg,
                                                       ProtocolEnv& env, Rng& rng) {
  (void)rng;
  switch (protocol_) {
    case Protocol::ka2: {
      if (step_ != 1 || !envelope_ok(msg, MsgType::ka2_reply)) return abort();
      auto key = ka(env.params, msg.fields[0], keypair_->sk);
      if (!key) return abort();
      AvValue av = transcript_av(Protocol::ka2, env.av_oracle, output_.peer,
                                 {keypair_->pk, msg.fields[0]});
      step_ = 2;
      accept(std::move(*key), std::move(av));
      return std::nullopt;
    }
    case Protocol::kem2: {
      if (step_ != 1 || !envelope_ok(msg, MsgType::kem2_ct)) return abort();
      auto key = kem_decaps(env.params, env.kdf_oracle, msg.fields[0], keypair_->sk);
      if (!key) return abort();
      AvValue av = transcript_av(Protocol::kem2, env.av_oracle, output_.peer,
                                 {keypair_->pk, msg.fields[0]});
      step_ = 2;
      accept(std::move(*key), std::move(av));
      return std::nullopt;
    }
    case Protocol::ka3: {
      if (step_ != 1 || !envelope_ok(msg, MsgType::ka3_reply)) return abort();
      auto key = ka(env.params, msg.fields[0], keypair_->sk);
      if (!key) return abort();
      AvValue av = transcript_av(Protocol::ka3, env.av_oracle, output_.peer,
                                 {commit_pair_->commitment, msg.fields[0], keypair_->pk});
      step_ = 2;
      accept(std::move(*key), std::move(av));
      return outbound(MsgType::ka3_open,
                      {commit_pair_->opening.randomness, commit_pair_->opening.message});
    }
    case Protocol::kem3: {
      if (step_ != 1 || !envelope_ok(msg, MsgType::kem3_ct)) return abort();
      auto key = kem_decaps(env.params, env.kdf_oracle, msg.fields[0], keypair_->sk);
      if (!key) return abort();
      AvValue av = transcript_av(Protocol::kem3, env.av_oracle, output_.peer,
                                 {commit_pair_->commitment, keypair_->pk, *nonce_, msg.fields[0]});
      step_ = 2;
      accept(std::move(*key), std::move(av));
      return outbound(MsgType::kem3_open,
                      {commit_pair_->opening.randomness, commit_pair_->opening.message});
    }
  }
  return abort();
}

std::optional<ProtocolMessage> Session::responder_step(const ProtocolMessage& msg,
                                                       ProtocolEnv& env, Rng& rng) {
  switch (protocol_) {
    case Protocol::ka2: {
      if (step_ != 0 || !envelope_ok(msg, MsgType::ka2_key)) return abort();
      output_.peer = msg.sender;
      keypair_ = ka_keygen(env.params, rng);
      auto key = ka(env.params, msg.fields[0], keypair_->sk);
      if (!key) return abort();
      AvValue av =
          transcript_av(Protocol::ka2, env.av_oracle, self_, {msg.fields[0], keypair_->pk});
      step_ = 1;
      request_content_ = tlv_request({msg.fields[0]});
      accept(std::move(*key), std::move(av));
      return outbound(MsgType::ka2_reply, {keypair_->pk});
    }
    case Protocol::kem2: {
      if (step_ != 0 || !envelope_ok(msg, MsgType::kem2_key)) return abort();
      output_.peer = msg.sender;
      auto enc = kem_encaps(env.params, env.kdf_oracle, msg.fields[0], rng);
      if (!enc) return abort();
      AvValue av =
          transcript_av(Protocol::kem2, env.av_oracle, self_, {msg.fields[0], enc->ct});
      step_ = 1;
      request_content_ = tlv_request({msg.fields[0]});
      accept(std::move(enc->key), std::move(av));
      return outbound(MsgType::kem2_ct, {enc->ct});
    }
    case Protocol::ka3: {
      if (step_ == 0) {
        if (!envelope_ok(msg, MsgType::ka3_commit)) return abort();
        output_.peer = msg.sender;
        commitment_seen_ = msg.fields[0];
        keypair_ = ka_keygen(env.params, rng);
        step_ = 1;
        return outbound(MsgType::ka3_reply, {keypair_->pk});
      }
      if (step_ != 1 || !envelope_ok(msg, MsgType::ka3_open)) return abort();
      if (msg.sender != output_.peer) return abort();
      auto wrapped = env.commit.open(*commitment_seen_, {msg.fields[0], msg.fields[1]});
      if (!wrapped) return abort();
      auto peer_pk = unwrap_committed(*wrapped);
      if (!peer_pk) return abort();
      auto key = ka(env.params, *peer_pk, keypair_->sk);
      if (!key) return abort();
      AvValue av = transcript_av(Protocol::ka3, env.av_oracle, self_,
                                 {*commitment_seen_, keypair_->pk, *peer_pk});
      step_ = 2;
      request_content_ = tlv_request({*peer_pk});
      accept(std::move(*key), std::move(av));
      return std::nullopt;
    }
    case Protocol::kem3: {
      if (step_ == 0) {
        if (!envelope_ok(msg, MsgType::kem3_commit)) return abort();
        output_.peer = msg.sender;
        commitment_seen_ = msg.fields[0];
        peer_pk_ = msg.fields[1];
        auto enc = kem_encaps(env.params, env.kdf_oracle, *peer_pk_, rng);
        if (!enc) return abort();
        ciphertext_ = enc->ct;
        kem_key_ = enc->key;
        step_ = 1;
        return outbound(MsgType::kem3_ct, {enc->ct});
      }
      if (step_ != 1 || !envelope_ok(msg, MsgType::kem3_open)) return abort();
      if (msg.sender != output_.peer) return abort();
      auto wrapped = env.commit.open(*commitment_seen_, {msg.fields[0], msg.fields[1]});
      if (!wrapped) return abort();
      auto nonce = unwrap_committed(*wrapped);
      if (!nonce) return abort();
      AvValue av = transcript_av(Protocol::kem3, env.av_oracle, self_,
                                 {*commitment_seen_, *peer_pk_, *nonce, *ciphertext_});
      step_ = 2;
      request_content_ = tlv_request({*peer_pk_, *nonce});
      accept(std::move(*kem_key_), std::move(av));
      return std::nullopt;
    }
  }
  return abort();
}

}  // namespace cbake
