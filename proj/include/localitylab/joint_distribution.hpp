#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace localitylab {

/// A measurement outcome, always +1 or -1.
using Outcome = int;
using OutcomeTuple = std::vector<Outcome>;

/// Exact probability table over {+1,-1}^n.
///
/// Outcome tuples are indexed like computational basis states: party 0 is the
/// most significant bit and a set bit means outcome -1.
class JointDistribution {
 public:
  static constexpr double kSumTolerance = 1e-10;

  JointDistribution() = default;

  /// Takes ownership of a table of 2^num_parties probabilities. Throws
  /// InvariantError if an entry is negative or the total differs from 1.
  JointDistribution(std::size_t num_parties, std::vector<double> probabilities);

  /// Point mass on one outcome tuple.
  static JointDistribution point_mass(const OutcomeTuple& outcomes);

  std::size_t num_parties() const noexcept { return num_parties_; }
  std::size_t size() const noexcept { return p_.size(); }
  std::span<const double> probabilities() const noexcept { return p_; }

  double probability(const OutcomeTuple& outcomes) const;
  double operator[](std::size_t index) const { return p_[index]; }

  /// E[product of outcomes of the parties flagged in `parties`].
  double product_expectation(const std::vector<bool>& parties) const;
  /// E[product of all outcomes].
  double product_expectation() const;
  /// E[outcome of one party].
  double marginal_mean(std::size_t party) const;

  static std::size_t index_of(const OutcomeTuple& outcomes);
  static OutcomeTuple outcomes_at(std::size_t num_parties, std::size_t index);

 private:
  std::size_t num_parties_ = 0;
  std::vector<double> p_;
};

}  // namespace localitylab
