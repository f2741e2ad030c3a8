#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "cbake/commitment.hpp"
#include "cbake/encoding.hpp"
#include "cbake/primitives.hpp"
#include "cbake/rng.hpp"

namespace cbake {

enum class Protocol { ka2, kem2, ka3, kem3 };
enum class Role { initiator, responder };
enum class SessionStatus { running, accepted, aborted };

bool is_two_pass(Protocol protocol);
const char* protocol_name(Protocol protocol);
std::optional<Protocol> protocol_from_name(std::string_view name);

// Wire tags. High nibble selects the flow, low nibble the pass number.
enum class MsgType : uint8_t {
  ka2_key = 0x11,
  ka2_reply = 0x12,
  kem2_key = 0x21,
  kem2_ct = 0x22,
  ka3_commit = 0x31,
  ka3_reply = 0x32,
  ka3_open = 0x33,
  kem3_commit = 0x41,
  kem3_ct = 0x42,
  kem3_open = 0x43,
};

const char* msg_type_name(MsgType type);
size_t msg_field_count(MsgType type);

// Flat message container: a type tag plus addressing and payload fields.
// Serialization is the tag byte followed by the TLV tuple
// (sender, receiver, session, payload fields...) in that order; parsing
// round-trips byte-exactly and rejects anything malformed.
struct ProtocolMessage {
  MsgType type;
  PartyId sender;
  PartyId receiver;
  Bytes session;               // transport session id; doubles as the
                               // two-pass session tag
  std::vector<Bytes> fields;   // payload in documented per-type order

  Bytes serialize() const;
  static std::optional<ProtocolMessage> parse(const Bytes& wire);
  bool operator==(const ProtocolMessage&) const = default;
};

// Payload field orders:
//   ka2_key     [pk_a]          ka2_reply  [pk_b]
//   kem2_key    [pk]            kem2_ct    [ct]
//   ka3_commit  [c]             ka3_reply  [pk_b]      ka3_open [r, m]
//   kem3_commit [c, pk]         kem3_ct    [ct]        kem3_open [r, m]

struct EnvConfig {
  Profile profile = Profile::toy64;
  unsigned av_bits = 256;
  unsigned kdf_bits = 256;
  unsigned commit_bits = 256;
  unsigned nonce_bits = 256;
};

// Everything both parties (and an adversary, in simulations) share during
// one exchange: group constants and the oracle instances. Single-threaded
// by contract; parallel experiments build one per trial from a seed.
struct ProtocolEnv {
  EnvConfig config;
  GroupParams params;
  CommitContext commit;
  OracleTable av_oracle;
  OracleTable kdf_oracle;

  static ProtocolEnv make(const EnvConfig& config, uint64_t seed);
};

struct SessionOutput {
  SessionStatus status = SessionStatus::running;
  std::optional<Bytes> key;  // engaged iff accepted
  AvValue av;                // engaged iff accepted
  PartyId self{};
  PartyId peer{};            // initiator: intended responder; responder:
                             // claimed sender of the first message
  Role role = Role::initiator;
};

// Out-of-band comparison: accept iff both sides accepted and their
// authentication values are identical, defined digests.
bool finalize_if(const SessionOutput& a, const SessionOutput& b);

// Commitment message space used by the three-pass flows: committed values are
// TLV-wrapped so an opening carries one unambiguous byte string. Exposed so
// simulated attackers can produce well-formed commitments of their own.
Bytes wrap_committed(const Bytes& value);
std::optional<Bytes> unwrap_committed(const Bytes& wrapped);

// The digest-oracle input tuple each protocol hashes, receiver identity
// first. values are the remaining slots in wire order; nullopt marks an
// undefined slot (e.g. a failed opening) that poisons the digest. Throws if
// the count does not match the protocol. Slot orders:
//   ka2:  pk_initiator, pk_responder
//   kem2: pk, ct
//   ka3:  c, pk_responder, pk_initiator
//   kem3: c, pk, nonce, ct
std::vector<FieldValue> av_tuple(Protocol protocol, const PartyId& receiver,
                                 const std::vector<std::optional<Bytes>>& values);

// Per-role, per-protocol state machine. Any out-of-order, duplicate, or
// malformed input aborts the session; nothing is ever computed at the wrong
// step. The initiator never checks who answered it (the flows authenticate
// only the initiator to the responder), while the responder checks
// addressing and sender consistency.
class Session {
 public:
  static Session make_initiator(Protocol protocol, PartyId self, PartyId peer, Bytes session_id);
  static Session make_responder(Protocol protocol, PartyId self, Bytes session_id);

  // Initiator only, step 0 only: emits the first message.
  ProtocolMessage start(ProtocolEnv& env, Rng& rng);

  // Feed an inbound message; returns the reply when the flow calls for one.
  std::optional<ProtocolMessage> on_message(const ProtocolMessage& msg, ProtocolEnv& env,
                                            Rng& rng);

  Protocol protocol() const { return protocol_; }
  Role role() const { return role_; }
  SessionStatus status() const { return output_.status; }
  const SessionOutput& output() const { return output_; }
  const Bytes& session_id() const { return session_id_; }

  // TLV summary of the key-establishment request this side started or
  // validated (claimed public key, plus the nonce for the kem3 flow).
  // Engaged after the initiator emits its first message / after the
  // responder accepts. Break detection compares the two.
  const std::optional<Bytes>& request_content() const { return request_content_; }

  // Recompute this side's authentication value from transcript pieces; used
  // by tests to pin the AV to the documented field order.
  static AvValue transcript_av(Protocol protocol, OracleTable& av_oracle, const PartyId& receiver,
                               const std::vector<Bytes>& fields);

 private:
  Session(Protocol protocol, Role role, PartyId self, PartyId peer, Bytes session_id);

  std::optional<ProtocolMessage> abort();
  void accept(Bytes key, AvValue av);
  ProtocolMessage outbound(MsgType type, std::vector<Bytes> fields) const;
  bool envelope_ok(const ProtocolMessage& msg, MsgType expected) const;

  std::optional<ProtocolMessage> initiator_step(const ProtocolMessage& msg, ProtocolEnv& env,
                                                Rng& rng);
  std::optional<ProtocolMessage> responder_step(const ProtocolMessage& msg, ProtocolEnv& env,
                                                Rng& rng);

  Protocol protocol_;
  Role role_;
  PartyId self_;
  Bytes session_id_;
  int step_ = 0;
  SessionOutput output_;
  std::optional<Bytes> request_content_;

  // Locals, engaged only once the step that defines them has run.
  std::optional<KeyPair> keypair_;
  std::optional<CommitPair> commit_pair_;
  std::optional<Bytes> nonce_;
  std::optional<Bytes> commitment_seen_;
  std::optional<Bytes> peer_pk_;
  std::optional<Bytes> ciphertext_;
  std::optional<Bytes> kem_key_;
};

}  // namespace cbake
