#include "localitylab/strategies.hpp"

#include <bit>
#include <cstring>
#include <map>
#include <sstream>

#include "localitylab/errors.hpp"

namespace localitylab {

std::string_view party_name(PartyIndex p) noexcept {
  switch (p) {
    case kAlice: return "alice";
    case kBob: return "bob";
    case kCandice: return "candice";
    default: return "party";
  }
}

namespace {

class Fnv1a {
 public:
  void add(const void* data, std::size_t n) noexcept {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= bytes[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(double x) noexcept {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    add(&bits, sizeof bits);
  }
  void add(const UnitVector3& v) noexcept {
    add(v.x());
    add(v.y());
    add(v.z());
  }
  void add_int(std::int64_t x) noexcept { add(&x, sizeof x); }
  std::uint64_t value() const noexcept { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t digest(const HiddenState& h) noexcept {
  Fnv1a f;
  f.add_int(static_cast<std::int64_t>(h.index()));
  std::visit(
      [&f](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SpherePoint>) {
          f.add(v.lambda);
        } else if constexpr (std::is_same_v<T, SpherePair>) {
          f.add(v.lambda1);
          f.add(v.lambda2);
        } else {
          for (int r : v.r) f.add_int(r);
        }
      },
      h);
  return f.value();
}

BitString::BitString(std::initializer_list<bool> bits) {
  for (bool b : bits) push_back(b);
}

void BitString::push_back(bool bit) {
  if (size_ == kCapacity) throw SizeError("bit string is full");
  if (bit) word_ |= std::uint64_t{1} << size_;
  ++size_;
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) s.push_back((*this)[i] ? '1' : '0');
  return s;
}

std::size_t Transcript::bit_count() const noexcept {
  std::size_t n = 0;
  for (const auto& m : messages) n += m.bits.size();
  return n;
}

std::string_view to_string(SettingKind k) noexcept {
  return k == SettingKind::PauliOnly ? "pauli-only" : "arbitrary-direction";
}

void StrategySpec::validate() const {
  std::size_t total = 0;
  for (const auto& s : round_schedule) {
    if (s.round < 1) throw InvariantError(name + ": schedule round must be >= 1");
    if (s.sender == s.receiver) throw InvariantError(name + ": party cannot message itself");
    if (s.sender >= num_parties || s.receiver >= num_parties) {
      throw InvariantError(name + ": schedule names a party out of range");
    }
    if (s.bits == 0) throw InvariantError(name + ": scheduled message carries no bits");
    total += s.bits;
  }
  if (total != declared_bits) {
    std::ostringstream os;
    os << name << ": declared_bits " << declared_bits << " but schedule carries " << total;
    throw InvariantError(os.str());
  }
}

// ---------------------------------------------------------------------------

SpherePoint bell_prepare(Rng& rng) { return SpherePoint{sample_sphere(rng)}; }

Outcome bell_alice(const UnitVector3& m, const SpherePoint& h) noexcept {
  return sign_of(m.dot(h.lambda));
}

Outcome bell_bob(const UnitVector3& n, const SpherePoint& h) noexcept {
  return -sign_of(n.dot(h.lambda));
}

// ---------------------------------------------------------------------------

HiddenBits3 tessier_prepare(Rng& rng) {
  HiddenBits3 h;
  for (int& r : h.r) r = rng.sign();
  return h;
}

Outcome tessier_local_outcome(PartyIndex party, PauliAxis setting, const HiddenBits3& h) {
  const int r1 = h.r[0], r2 = h.r[1], r3 = h.r[2];
  if (setting == PauliAxis::I) return 1;
  if (setting == PauliAxis::Z) return r1;
  switch (party) {
    case kAlice: return setting == PauliAxis::X ? -r2 * r3 : -r1 * r2 * r3;
    case kBob: return setting == PauliAxis::X ? r2 : r1 * r2;
    case kCandice: return setting == PauliAxis::X ? r3 : r1 * r3;
    default: break;
  }
  throw ArityError("the GHZ table has three parties");
}

bool tessier_bob_bit(PauliAxis bob) noexcept { return bob == PauliAxis::Y; }

Outcome tessier_alice_outcome(PauliAxis alice, const HiddenBits3& h, bool bob_measured_y) {
  const Outcome local = tessier_local_outcome(kAlice, alice, h);
  if (alice == PauliAxis::I) return local;
  return (alice == PauliAxis::Y || bob_measured_y) ? -local : local;
}

OutcomeTriple tessier_run_no_comm(const PauliTriple& s, const HiddenBits3& h) {
  return {tessier_local_outcome(kAlice, s[0], h), tessier_local_outcome(kBob, s[1], h),
          tessier_local_outcome(kCandice, s[2], h)};
}

TessierResult tessier_run_one_bit(const PauliTriple& s, const HiddenBits3& h) {
  TessierResult out;
  const bool bit = tessier_bob_bit(s[1]);
  out.transcript.messages.push_back(Message{1, kBob, kAlice, BitString{bit}});
  out.outcomes = {tessier_alice_outcome(s[0], h, bit), tessier_local_outcome(kBob, s[1], h),
                  tessier_local_outcome(kCandice, s[2], h)};
  return out;
}

std::vector<HiddenBits3> tessier_hidden_space() {
  std::vector<HiddenBits3> out;
  for (int i = 0; i < 8; ++i) {
    out.push_back(HiddenBits3{{(i & 4) ? -1 : 1, (i & 2) ? -1 : 1, (i & 1) ? -1 : 1}});
  }
  return out;
}

// ---------------------------------------------------------------------------

SpherePair toner_bacon_prepare(Rng& rng) {
  auto l1 = sample_sphere(rng);
  auto l2 = sample_sphere(rng);
  return SpherePair{l1, l2};
}

TonerBaconAlice toner_bacon_alice(const UnitVector3& m, const SpherePair& h) noexcept {
  const int s1 = sign_of(m.dot(h.lambda1));
  const int s2 = sign_of(m.dot(h.lambda2));
  return {-s1, s1 * s2};
}

Outcome toner_bacon_bob(const UnitVector3& n, const SpherePair& h, int c) noexcept {
  return sign_of(n.dot(h.lambda1.vector() + double(c) * h.lambda2.vector()));
}

TonerBaconResult toner_bacon_run(const UnitVector3& m, const UnitVector3& n,
                                 const SpherePair& h) {
  const auto alice = toner_bacon_alice(m, h);
  TonerBaconResult out;
  out.transcript.messages.push_back(
      Message{1, kAlice, kBob, BitString{encode_sign(alice.c)}});
  const int c = decode_sign(out.transcript.messages.front().bits[0]);
  out.a = alice.a;
  out.b = toner_bacon_bob(n, h, c);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
const T& expect_hidden(const HiddenState& h, std::string_view strategy) {
  if (const auto* v = std::get_if<T>(&h)) return *v;
  throw InvariantError(std::string(strategy) + ": wrong hidden-state variant");
}

const Message& expect_message(std::span<const Message> inbox, PartyIndex from,
                              std::string_view strategy) {
  for (const auto& m : inbox) {
    if (m.sender == from && !m.bits.empty()) return m;
  }
  throw ProtocolViolation(std::string(strategy) + ": expected message from " +
                          std::string(party_name(from)) + " is missing");
}

UnitVector3 expect_direction(const MeasurementSetting& s) {
  auto d = direction_of(s);
  if (!d) throw CapabilityError("identity setting has no spin direction");
  return *d;
}

class BellSinglet final : public Strategy {
 public:
  BellSinglet() {
    spec_ = {std::string(kBellSinglet), 2, SettingKind::ArbitraryDirection, 0, {}};
    spec_.validate();
  }
  const StrategySpec& spec() const noexcept override { return spec_; }
  HiddenState prepare(Rng& rng) const override { return bell_prepare(rng); }
  Outcome play(PartyIndex party, const MeasurementSetting& own, const HiddenState& hidden,
               std::span<const Message>, Outbox&) const override {
    const auto& h = expect_hidden<SpherePoint>(hidden, spec_.name);
    const auto d = expect_direction(own);
    return party == kAlice ? bell_alice(d, h) : bell_bob(d, h);
  }

 private:
  StrategySpec spec_;
};

class TessierGhz3 final : public Strategy {
 public:
  explicit TessierGhz3(bool with_bit) : with_bit_(with_bit) {
    if (with_bit_) {
      spec_ = {std::string(kTessierGhz3), 3, SettingKind::PauliOnly, 1, {{1, kBob, kAlice, 1}}};
    } else {
      spec_ = {std::string(kTessierGhz3NoComm), 3, SettingKind::PauliOnly, 0, {}};
    }
    spec_.validate();
  }
  const StrategySpec& spec() const noexcept override { return spec_; }
  HiddenState prepare(Rng& rng) const override { return tessier_prepare(rng); }
  Outcome play(PartyIndex party, const MeasurementSetting& own, const HiddenState& hidden,
               std::span<const Message> inbox, Outbox& outbox) const override {
    const auto& h = expect_hidden<HiddenBits3>(hidden, spec_.name);
    const PauliAxis axis = pauli_of(own);
    if (!with_bit_) return tessier_local_outcome(party, axis, h);
    if (party == kBob) outbox.send(kAlice, 1, BitString{tessier_bob_bit(axis)});
    if (party == kAlice) {
      const bool bit = expect_message(inbox, kBob, spec_.name).bits[0];
      return tessier_alice_outcome(axis, h, bit);
    }
    return tessier_local_outcome(party, axis, h);
  }
  std::vector<HiddenState> hidden_state_space() const override {
    std::vector<HiddenState> out;
    for (const auto& h : tessier_hidden_space()) out.emplace_back(h);
    return out;
  }

 private:
  bool with_bit_;
  StrategySpec spec_;
};

class TonerBacon final : public Strategy {
 public:
  TonerBacon() {
    spec_ = {std::string(kTonerBacon), 2, SettingKind::ArbitraryDirection, 1,
             {{1, kAlice, kBob, 1}}};
    spec_.validate();
  }
  const StrategySpec& spec() const noexcept override { return spec_; }
  HiddenState prepare(Rng& rng) const override { return toner_bacon_prepare(rng); }
  Outcome play(PartyIndex party, const MeasurementSetting& own, const HiddenState& hidden,
               std::span<const Message> inbox, Outbox& outbox) const override {
    const auto& h = expect_hidden<SpherePair>(hidden, spec_.name);
    const auto d = expect_direction(own);
    if (party == kAlice) {
      const auto alice = toner_bacon_alice(d, h);
      outbox.send(kBob, 1, BitString{encode_sign(alice.c)});
      return alice.a;
    }
    const int c = decode_sign(expect_message(inbox, kAlice, spec_.name).bits[0]);
    return toner_bacon_bob(d, h, c);
  }

 private:
  StrategySpec spec_;
};

const std::map<std::string, std::shared_ptr<const Strategy>, std::less<>>& registry() {
  static const auto* r = new std::map<std::string, std::shared_ptr<const Strategy>, std::less<>>{
      {std::string(kBellSinglet), std::make_shared<BellSinglet>()},
      {std::string(kTessierGhz3), std::make_shared<TessierGhz3>(true)},
      {std::string(kTessierGhz3NoComm), std::make_shared<TessierGhz3>(false)},
      {std::string(kTonerBacon), std::make_shared<TonerBacon>()},
  };
  return *r;
}

}  // namespace

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names{std::string(kBellSinglet),
                                              std::string(kTessierGhz3),
                                              std::string(kTessierGhz3NoComm),
                                              std::string(kTonerBacon)};
  return names;
}

std::shared_ptr<const Strategy> find_strategy(std::string_view name) {
  const auto& r = registry();
  if (auto it = r.find(name); it != r.end()) return it->second;
  throw UsageError("unknown strategy '" + std::string(name) + "'");
}

}  // namespace localitylab
