#include "localitylab/runtime.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <thread>

#include "localitylab/errors.hpp"

namespace localitylab {

namespace {

/// Per-strategy state computed once before a batch of trials.
struct Plan {
  const Strategy* strategy;
  std::vector<PartyIndex> order;
};

/// Buffers reused across trials so the hot loop does not allocate.
struct Scratch {
  std::vector<Message> messages;
  std::vector<Message> inbox;
  std::vector<bool> slot_used;
  OutcomeTuple outcomes;
};

void execute(const Plan& plan, const Settings& settings, const HiddenState& hidden,
             Scratch& s) {
  const auto& spec = plan.strategy->spec();
  s.messages.clear();
  s.slot_used.assign(spec.round_schedule.size(), false);
  s.outcomes.assign(spec.num_parties, 1);
  std::size_t bits = 0;

  for (PartyIndex party : plan.order) {
    s.inbox.clear();
    for (const auto& m : s.messages) {
      if (m.receiver == party) s.inbox.push_back(m);
    }
    const std::size_t before = s.messages.size();
    Outbox outbox(party, s.messages);
    const Outcome o = plan.strategy->play(party, settings[party], hidden, s.inbox, outbox);
    if (o != 1 && o != -1) {
      throw ProtocolViolation(spec.name + ": party program returned a non +-1 outcome");
    }
    s.outcomes[party] = o;

    for (std::size_t i = before; i < s.messages.size(); ++i) {
      const auto& m = s.messages[i];
      if (m.bits.empty()) throw ProtocolViolation(spec.name + ": empty message");
      std::size_t slot = spec.round_schedule.size();
      for (std::size_t k = 0; k < spec.round_schedule.size(); ++k) {
        const auto& e = spec.round_schedule[k];
        if (!s.slot_used[k] && e.round == m.round && e.sender == m.sender &&
            e.receiver == m.receiver && m.bits.size() <= e.bits) {
          slot = k;
          break;
        }
      }
      if (slot == spec.round_schedule.size()) {
        std::ostringstream os;
        os << spec.name << ": unscheduled message " << party_name(m.sender) << " -> "
           << party_name(m.receiver) << " in round " << m.round << " (" << m.bits.size()
           << " bits)";
        throw ProtocolViolation(os.str());
      }
      s.slot_used[slot] = true;
      bits += m.bits.size();
      if (bits > spec.declared_bits) {
        throw ProtocolViolation(spec.name + ": communication budget exceeded");
      }
    }
  }
}

Plan make_plan(const Strategy& strategy, const Settings& settings) {
  check_settings(strategy, settings);
  return Plan{&strategy, execution_order(strategy.spec())};
}

void tally_trial(const Scratch& s, Tally& t) {
  std::size_t index = 0;
  for (Outcome o : s.outcomes) index = (index << 1) | (o == -1 ? 1u : 0u);
  ++t.counts[index];
  std::size_t bits = 0;
  for (const auto& m : s.messages) bits += m.bits.size();
  t.total_bits += bits;
  if (t.trials == 0) {
    t.min_bits = t.max_bits = bits;
  } else {
    t.min_bits = std::min(t.min_bits, bits);
    t.max_bits = std::max(t.max_bits, bits);
  }
  ++t.trials;
}

Tally empty_tally(std::size_t num_parties) {
  Tally t;
  t.num_parties = num_parties;
  t.counts.assign(std::size_t{1} << num_parties, 0);
  return t;
}

void merge(Tally& into, const Tally& from) {
  if (from.trials == 0) return;
  for (std::size_t i = 0; i < into.counts.size(); ++i) into.counts[i] += from.counts[i];
  into.min_bits = into.trials == 0 ? from.min_bits : std::min(into.min_bits, from.min_bits);
  into.max_bits = into.trials == 0 ? from.max_bits : std::max(into.max_bits, from.max_bits);
  into.total_bits += from.total_bits;
  into.trials += from.trials;
}

}  // namespace

double Tally::product_mean(const std::vector<bool>& parties) const {
  if (trials == 0) throw DomainError("empty tally");
  std::size_t mask = 0;
  for (std::size_t k = 0; k < num_parties; ++k) {
    if (parties[k]) mask |= std::size_t{1} << (num_parties - 1 - k);
  }
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto c = static_cast<std::int64_t>(counts[i]);
    sum += (std::popcount(i & mask) % 2 == 0) ? c : -c;
  }
  return static_cast<double>(sum) / static_cast<double>(trials);
}

double Tally::party_mean(PartyIndex party) const {
  std::vector<bool> mask(num_parties, false);
  mask.at(party) = true;
  return product_mean(mask);
}

JointDistribution Tally::empirical() const {
  if (trials == 0) throw DomainError("empty tally");
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(trials);
  }
  return JointDistribution(num_parties, std::move(p));
}

void check_settings(const Strategy& strategy, const Settings& settings) {
  const auto& spec = strategy.spec();
  if (settings.size() != spec.num_parties) {
    std::ostringstream os;
    os << spec.name << " expects " << spec.num_parties << " settings, got "
       << settings.size();
    throw ArityError(os.str());
  }
  for (std::size_t k = 0; k < settings.size(); ++k) {
    const auto& s = settings[k];
    if (spec.setting_kind == SettingKind::PauliOnly && !is_pauli(s)) {
      throw CapabilityError(spec.name + " accepts only Pauli settings; " +
                            std::string(party_name(k)) + " was given " + describe(s));
    }
    if (spec.setting_kind == SettingKind::ArbitraryDirection && is_identity(s)) {
      throw CapabilityError(spec.name + " needs a spin direction for every party; " +
                            std::string(party_name(k)) + " was given I");
    }
  }
}

std::vector<PartyIndex> execution_order(const StrategySpec& spec) {
  std::vector<std::size_t> pending(spec.num_parties, 0);
  for (const auto& e : spec.round_schedule) ++pending[e.receiver];
  std::vector<PartyIndex> order;
  std::vector<bool> done(spec.num_parties, false);
  while (order.size() < spec.num_parties) {
    bool progressed = false;
    for (PartyIndex p = 0; p < spec.num_parties; ++p) {
      if (done[p] || pending[p] != 0) continue;
      done[p] = true;
      order.push_back(p);
      for (const auto& e : spec.round_schedule) {
        if (e.sender == p) --pending[e.receiver];
      }
      progressed = true;
      break;
    }
    if (!progressed) throw InvariantError(spec.name + ": message schedule is cyclic");
  }
  return order;
}

RunRecord run_with_hidden(const Strategy& strategy, const Settings& settings,
                          const HiddenState& hidden) {
  const Plan plan = make_plan(strategy, settings);
  Scratch s;
  execute(plan, settings, hidden, s);
  return RunRecord{settings, s.outcomes, Transcript{s.messages}, digest(hidden)};
}

RunRecord run_trial(const Strategy& strategy, const Settings& settings, Rng& rng) {
  check_settings(strategy, settings);
  const HiddenState hidden = strategy.prepare(rng);
  return run_with_hidden(strategy, settings, hidden);
}

Tally simulate(const Strategy& strategy, const Settings& settings, std::uint64_t trials,
               RngSeed seed, const SimulationOptions& options) {
  const Plan plan = make_plan(strategy, settings);
  const std::size_t n = strategy.spec().num_parties;

  auto run_block = [&](std::uint64_t begin, std::uint64_t end, Tally& t) {
    Scratch s;
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng = Rng::for_stream(seed, options.first_stream + i);
      const HiddenState hidden = strategy.prepare(rng);
      execute(plan, settings, hidden, s);
      tally_trial(s, t);
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  Tally total = empty_tally(n);
  if (threads == 1 || trials < 2 * threads) {
    run_block(0, trials, total);
    return total;
  }
  std::vector<Tally> parts(threads, empty_tally(n));
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      const std::uint64_t begin = trials * w / threads;
      const std::uint64_t end = trials * (w + 1) / threads;
      workers.emplace_back([&, w, begin, end] {
        try {
          run_block(begin, end, parts[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& p : parts) merge(total, p);
  return total;
}

CorrelationEstimate estimate_correlation(const Strategy& strategy, const Settings& settings,
                                         std::uint64_t trials, RngSeed seed,
                                         const SimulationOptions& options) {
  if (trials == 0) throw DomainError("estimate_correlation needs at least one trial");
  const Tally t = simulate(strategy, settings, trials, seed, options);
  CorrelationEstimate e;
  e.mean = t.product_mean(measured_parties(settings));
  e.trials = trials;
  e.confidence = kAuditConfidence;
  e.hoeffding_epsilon = hoeffding_epsilon(trials, e.confidence);
  for (PartyIndex p = 0; p < t.num_parties; ++p) e.party_means.push_back(t.party_mean(p));
  return e;
}

JointDistribution enumerate_exact(const Strategy& strategy, const Settings& settings) {
  const auto space = strategy.hidden_state_space();
  if (space.empty()) {
    throw UnsupportedError(strategy.spec().name +
                           " has a continuous hidden state; exact enumeration is unavailable");
  }
  const Plan plan = make_plan(strategy, settings);
  const std::size_t n = strategy.spec().num_parties;
  std::vector<double> p(std::size_t{1} << n, 0.0);
  const double w = 1.0 / static_cast<double>(space.size());
  Scratch s;
  for (const auto& h : space) {
    execute(plan, settings, h, s);
    p[JointDistribution::index_of(s.outcomes)] += w;
  }
  return JointDistribution(n, std::move(p));
}

NoSignallingReport audit_no_signalling(const Strategy& strategy, PartyIndex party,
                                       const MeasurementSetting& own_setting,
                                       const std::vector<Settings>& other_settings,
                                       std::uint64_t trials, RngSeed seed) {
  const auto& spec = strategy.spec();
  if (party >= spec.num_parties) throw ArityError("audited party out of range");

  NoSignallingReport r;
  r.strategy = spec.name;
  r.party = party;
  r.own_setting = own_setting;
  r.trials = trials;
  r.confidence = kAuditConfidence;
  r.epsilon = hoeffding_epsilon(trials, r.confidence);
  r.threshold = 3.0 * r.epsilon;
  for (const auto& e : spec.round_schedule) {
    if (e.receiver == party) r.inbound_paths.push_back(e);
  }

  for (std::size_t k = 0; k < other_settings.size(); ++k) {
    const auto& others = other_settings[k];
    if (others.size() + 1 != spec.num_parties) {
      throw ArityError("each alternative must assign a setting to every other party");
    }
    Settings full;
    full.reserve(spec.num_parties);
    for (PartyIndex p = 0, j = 0; p < spec.num_parties; ++p) {
      full.push_back(p == party ? own_setting : others[j++]);
    }
    // Every cell replays the same streams, so only the settings differ.
    const Tally t = simulate(strategy, full, trials, seed, SimulationOptions{.threads = 1});
    r.cells.push_back(SignallingCell{std::move(full), t.party_mean(party)});
  }

  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    for (std::size_t j = i + 1; j < r.cells.size(); ++j) {
      const double d = std::abs(r.cells[i].marginal_mean - r.cells[j].marginal_mean);
      if (d > r.threshold) r.flags.push_back(SignallingFlag{i, j, d});
    }
  }
  return r;
}

CommunicationReport audit_communication(const Strategy& strategy,
                                        const std::vector<Settings>& settings_sample,
                                        RngSeed seed) {
  CommunicationReport r;
  r.strategy = strategy.spec().name;
  r.declared_bits = strategy.spec().declared_bits;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < settings_sample.size(); ++i) {
    Rng rng = Rng::for_stream(seed, i);
    const auto rec = run_trial(strategy, settings_sample[i], rng);
    const std::size_t bits = rec.transcript.bit_count();
    r.min_bits = i == 0 ? bits : std::min(r.min_bits, bits);
    r.max_bits = i == 0 ? bits : std::max(r.max_bits, bits);
    total += bits;
    ++r.runs;
  }
  r.mean_bits = r.runs == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(r.runs);
  return r;
}

std::vector<Settings> random_settings_sample(const Strategy& strategy, std::size_t count,
                                             RngSeed seed) {
  const auto& spec = strategy.spec();
  Rng rng(seed);
  std::vector<Settings> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Settings s;
    for (std::size_t p = 0; p < spec.num_parties; ++p) {
      if (spec.setting_kind == SettingKind::PauliOnly) {
        s.emplace_back(kPauliAxes[rng.next_u64() >> 62]);
      } else {
        s.emplace_back(sample_sphere(rng));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace localitylab
