#include "localitylab/joint_distribution.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "localitylab/errors.hpp"

namespace localitylab {

JointDistribution::JointDistribution(std::size_t num_parties,
                                     std::vector<double> probabilities)
    : num_parties_(num_parties), p_(std::move(probabilities)) {
  if (num_parties_ == 0 || num_parties_ > 30) {
    throw SizeError("joint distribution needs between 1 and 30 parties");
  }
  if (p_.size() != (std::size_t{1} << num_parties_)) {
    throw SizeError("probability table must have 2^num_parties entries");
  }
  double total = 0.0;
  for (double& p : p_) {
    if (!(p >= -kSumTolerance)) {
      std::ostringstream os;
      os << "negative probability " << p;
      throw InvariantError(os.str());
    }
    if (p < 0.0) p = 0.0;
    total += p;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "probabilities sum to " << total;
    throw InvariantError(os.str());
  }
}

JointDistribution JointDistribution::point_mass(const OutcomeTuple& outcomes) {
  std::vector<double> p(std::size_t{1} << outcomes.size(), 0.0);
  p[index_of(outcomes)] = 1.0;
  return JointDistribution(outcomes.size(), std::move(p));
}

std::size_t JointDistribution::index_of(const OutcomeTuple& outcomes) {
  std::size_t index = 0;
  for (Outcome o : outcomes) {
    if (o != 1 && o != -1) throw DomainError("outcomes must be +1 or -1");
    index = (index << 1) | (o == -1 ? 1u : 0u);
  }
  return index;
}

OutcomeTuple JointDistribution::outcomes_at(std::size_t num_parties, std::size_t index) {
  OutcomeTuple out(num_parties);
  for (std::size_t k = 0; k < num_parties; ++k) {
    const std::size_t bit = num_parties - 1 - k;
    out[k] = ((index >> bit) & 1u) ? -1 : 1;
  }
  return out;
}

double JointDistribution::probability(const OutcomeTuple& outcomes) const {
  if (outcomes.size() != num_parties_) throw ArityError("outcome tuple has wrong length");
  return p_[index_of(outcomes)];
}

double JointDistribution::product_expectation(const std::vector<bool>& parties) const {
  if (parties.size() != num_parties_) throw ArityError("party mask has wrong length");
  std::size_t mask = 0;
  for (std::size_t k = 0; k < num_parties_; ++k) {
    if (parties[k]) mask |= std::size_t{1} << (num_parties_ - 1 - k);
  }
  double e = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) {
    e += (std::popcount(i & mask) % 2 == 0) ? p_[i] : -p_[i];
  }
  return e;
}

double JointDistribution::product_expectation() const {
  return product_expectation(std::vector<bool>(num_parties_, true));
}

double JointDistribution::marginal_mean(std::size_t party) const {
  if (party >= num_parties_) throw ArityError("party index out of range");
  std::vector<bool> mask(num_parties_, false);
  mask[party] = true;
  return product_expectation(mask);
}

}  // namespace localitylab
