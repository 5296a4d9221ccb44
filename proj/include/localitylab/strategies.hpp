#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "localitylab/joint_distribution.hpp"
#include "localitylab/settings.hpp"
#include "localitylab/stats.hpp"
#include "localitylab/unit_vector.hpp"

namespace localitylab {

using PartyIndex = std::size_t;

inline constexpr PartyIndex kAlice = 0;
inline constexpr PartyIndex kBob = 1;
inline constexpr PartyIndex kCandice = 2;

std::string_view party_name(PartyIndex p) noexcept;

// ---------------------------------------------------------------------------
// Shared randomness

struct SpherePoint {
  UnitVector3 lambda;
};

struct SpherePair {
  UnitVector3 lambda1;
  UnitVector3 lambda2;
};

/// Three independent fair signs shared at preparation.
struct HiddenBits3 {
  std::array<int, 3> r{1, 1, 1};
};

using HiddenState = std::variant<SpherePoint, SpherePair, HiddenBits3>;

/// FNV-1a over the variant tag and the raw bytes of its fields. Equal hidden
/// states always give equal digests.
std::uint64_t digest(const HiddenState& h) noexcept;

// ---------------------------------------------------------------------------
// Messages

/// Ordered bits, at most 64.
class BitString {
 public:
  static constexpr std::size_t kCapacity = 64;

  BitString() = default;
  BitString(std::initializer_list<bool> bits);

  void push_back(bool bit);
  bool operator[](std::size_t i) const noexcept { return (word_ >> i) & 1u; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  /// "0101"
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::uint64_t word_ = 0;
  std::uint8_t size_ = 0;
};

struct Message {
  int round = 1;
  PartyIndex sender = 0;
  PartyIndex receiver = 0;
  BitString bits;

  friend bool operator==(const Message&, const Message&) = default;
};

struct Transcript {
  std::vector<Message> messages;

  std::size_t bit_count() const noexcept;
  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// Wire encoding of a sign: +1 -> 0, -1 -> 1.
constexpr bool encode_sign(int c) noexcept { return c < 0; }
constexpr int decode_sign(bool bit) noexcept { return bit ? -1 : 1; }

// ---------------------------------------------------------------------------
// Strategy description

enum class SettingKind { PauliOnly, ArbitraryDirection };

std::string_view to_string(SettingKind k) noexcept;

struct ScheduledMessage {
  int round = 1;
  PartyIndex sender = 0;
  PartyIndex receiver = 0;
  std::size_t bits = 1;
};

struct StrategySpec {
  std::string name;
  std::size_t num_parties = 0;
  SettingKind setting_kind = SettingKind::PauliOnly;
  std::size_t declared_bits = 0;
  std::vector<ScheduledMessage> round_schedule;

  /// Throws InvariantError if declared_bits differs from the schedule total or
  /// an entry is malformed (self-send, party out of range, round < 1, 0 bits).
  void validate() const;
};

/// Collects a party's outgoing messages. The runtime owns the sink and checks
/// each message against the schedule once the party returns.
class Outbox {
 public:
  Outbox(PartyIndex sender, std::vector<Message>& sink) : sender_(sender), sink_(&sink) {}

  void send(PartyIndex receiver, int round, BitString bits) {
    sink_->push_back(Message{round, sender_, receiver, bits});
  }

 private:
  PartyIndex sender_;
  std::vector<Message>* sink_;
};

/// A classical simulation protocol: a preparation step plus one program per
/// party. A program sees its own setting, the shared hidden state and its
/// inbox, and nothing else.
class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual const StrategySpec& spec() const noexcept = 0;
  virtual HiddenState prepare(Rng& rng) const = 0;
  virtual Outcome play(PartyIndex party, const MeasurementSetting& own,
                       const HiddenState& hidden, std::span<const Message> inbox,
                       Outbox& outbox) const = 0;

  /// Every hidden state with equal weight, or empty when the space is
  /// continuous.
  virtual std::vector<HiddenState> hidden_state_space() const { return {}; }
};

// ---------------------------------------------------------------------------
// Bell's zero-communication singlet model

SpherePoint bell_prepare(Rng& rng);
/// sign(m . lambda)
Outcome bell_alice(const UnitVector3& m, const SpherePoint& h) noexcept;
/// -sign(n . lambda)
Outcome bell_bob(const UnitVector3& n, const SpherePoint& h) noexcept;

// ---------------------------------------------------------------------------
// Tessier's GHZ table, three parties

HiddenBits3 tessier_prepare(Rng& rng);

/// Table entry for `party` with every factor of i dropped:
///        X        Y           Z    I
///   a   -R2R3    -R1R2R3      R1   1
///   b    R2       R1R2        R1   1
///   c    R3       R1R3        R1   1
Outcome tessier_local_outcome(PartyIndex party, PauliAxis setting, const HiddenBits3& h);

/// Bob's single bit to Alice: set iff he measures sigma_y.
bool tessier_bob_bit(PauliAxis bob) noexcept;

/// Alice's local entry, negated when she measures Y or the received bit is
/// set. An identity setting always gives +1.
Outcome tessier_alice_outcome(PauliAxis alice, const HiddenBits3& h, bool bob_measured_y);

using PauliTriple = std::array<PauliAxis, 3>;
using OutcomeTriple = std::array<Outcome, 3>;

OutcomeTriple tessier_run_no_comm(const PauliTriple& settings, const HiddenBits3& h);

struct TessierResult {
  OutcomeTriple outcomes;
  Transcript transcript;
};

TessierResult tessier_run_one_bit(const PauliTriple& settings, const HiddenBits3& h);

/// The eight equiprobable values of (R1, R2, R3).
std::vector<HiddenBits3> tessier_hidden_space();

// ---------------------------------------------------------------------------
// Toner-Bacon one-bit singlet protocol

SpherePair toner_bacon_prepare(Rng& rng);

struct TonerBaconAlice {
  Outcome a;
  int c;  // sign(m.l1) * sign(m.l2)
};

/// A = -sign(m . l1), c = sign(m . l1) sign(m . l2)
TonerBaconAlice toner_bacon_alice(const UnitVector3& m, const SpherePair& h) noexcept;
/// B = sign(n . (l1 + c l2))
Outcome toner_bacon_bob(const UnitVector3& n, const SpherePair& h, int c) noexcept;

struct TonerBaconResult {
  Outcome a;
  Outcome b;
  Transcript transcript;
};

TonerBaconResult toner_bacon_run(const UnitVector3& m, const UnitVector3& n,
                                 const SpherePair& h);

// ---------------------------------------------------------------------------
// Registry

inline constexpr std::string_view kBellSinglet = "bell-singlet";
inline constexpr std::string_view kTessierGhz3 = "tessier-ghz3";
inline constexpr std::string_view kTessierGhz3NoComm = "tessier-ghz3-nocomm";
inline constexpr std::string_view kTonerBacon = "toner-bacon";

/// Registered names in a fixed order.
const std::vector<std::string>& strategy_names();

/// Throws UsageError for an unknown name.
std::shared_ptr<const Strategy> find_strategy(std::string_view name);

}  // namespace localitylab
