#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "localitylab/joint_distribution.hpp"
#include "localitylab/settings.hpp"
#include "localitylab/stats.hpp"
#include "localitylab/strategies.hpp"

namespace localitylab {

/// Everything observable about one run.
struct RunRecord {
  Settings settings;
  OutcomeTuple outcomes;
  Transcript transcript;
  std::uint64_t hidden_state_digest = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct CorrelationEstimate {
  double mean = 0.0;  // E[product of measured-party outcomes]
  std::uint64_t trials = 0;
  double hoeffding_epsilon = 0.0;
  double confidence = kAuditConfidence;
  std::vector<double> party_means;
};

/// Outcome-tuple counts and transcript sizes over a block of trials.
struct Tally {
  std::size_t num_parties = 0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;  // indexed like JointDistribution
  std::uint64_t total_bits = 0;
  std::size_t min_bits = 0;
  std::size_t max_bits = 0;

  double product_mean(const std::vector<bool>& parties) const;
  double party_mean(PartyIndex party) const;
  JointDistribution empirical() const;
};

struct SimulationOptions {
  /// Trial i uses the generator Rng::for_stream(seed, first_stream + i).
  std::uint64_t first_stream = 0;
  /// Worker threads. Results do not depend on this value.
  unsigned threads = 1;
};

/// Throws ArityError if the count is wrong and CapabilityError if a setting is
/// not of the strategy's kind (directions for a Pauli-only strategy, or the
/// identity for a direction strategy).
void check_settings(const Strategy& strategy, const Settings& settings);

/// Order in which party programs run: every receiver after all its senders.
/// Throws InvariantError if the schedule is cyclic.
std::vector<PartyIndex> execution_order(const StrategySpec& spec);

/// Runs the party programs against a given hidden state.
RunRecord run_with_hidden(const Strategy& strategy, const Settings& settings,
                          const HiddenState& hidden);

/// Prepares a hidden state from `rng`, then runs the party programs in
/// schedule order. Throws ProtocolViolation if a program sends an
/// unscheduled message or exceeds the bit budget.
RunRecord run_trial(const Strategy& strategy, const Settings& settings, Rng& rng);

Tally simulate(const Strategy& strategy, const Settings& settings, std::uint64_t trials,
               RngSeed seed, const SimulationOptions& options = {});

/// Sample mean of the measured-party outcome product, with a Hoeffding
/// half-width at `kAuditConfidence`. Throws DomainError when trials == 0.
CorrelationEstimate estimate_correlation(const Strategy& strategy, const Settings& settings,
                                         std::uint64_t trials, RngSeed seed,
                                         const SimulationOptions& options = {});

/// Exact distribution over a finite hidden-state space, each state weighted
/// equally. Throws UnsupportedError for continuous hidden variables.
JointDistribution enumerate_exact(const Strategy& strategy, const Settings& settings);

struct SignallingCell {
  Settings settings;  // full assignment, audited party included
  double marginal_mean = 0.0;
};

struct SignallingFlag {
  std::size_t first = 0;
  std::size_t second = 0;
  double difference = 0.0;
};

struct NoSignallingReport {
  std::string strategy;
  PartyIndex party = 0;
  MeasurementSetting own_setting;
  std::uint64_t trials = 0;
  double confidence = kAuditConfidence;
  double epsilon = 0.0;
  double threshold = 0.0;  // 3 * epsilon
  std::vector<SignallingCell> cells;
  std::vector<SignallingFlag> flags;
  /// Scheduled messages into the audited party; the only channels that could
  /// carry another party's setting.
  std::vector<ScheduledMessage> inbound_paths;

  bool pass() const noexcept { return flags.empty(); }
};

/// Estimates `party`'s marginal for each assignment in `other_settings` (one
/// setting per other party, in party order) and flags any pair of cells whose
/// means differ by more than 3 epsilon. All cells run on streams [0, trials),
/// so a party whose program cannot see the other settings gets identical
/// marginals in every cell.
NoSignallingReport audit_no_signalling(const Strategy& strategy, PartyIndex party,
                                       const MeasurementSetting& own_setting,
                                       const std::vector<Settings>& other_settings,
                                       std::uint64_t trials, RngSeed seed);

struct CommunicationReport {
  std::string strategy;
  std::size_t declared_bits = 0;
  std::uint64_t runs = 0;
  std::size_t min_bits = 0;
  std::size_t max_bits = 0;
  double mean_bits = 0.0;

  /// Every run sent exactly the declared number of bits.
  bool matches_declared() const noexcept {
    return runs > 0 && min_bits == declared_bits && max_bits == declared_bits;
  }
};

/// One run per entry of `settings_sample`, run i on stream i.
CommunicationReport audit_communication(const Strategy& strategy,
                                        const std::vector<Settings>& settings_sample,
                                        RngSeed seed);

/// Random settings of the strategy's kind: uniform Pauli labels (identity
/// included) or uniform sphere directions.
std::vector<Settings> random_settings_sample(const Strategy& strategy, std::size_t count,
                                             RngSeed seed);

}  // namespace localitylab
