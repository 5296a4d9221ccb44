#include "localitylab/stats.hpp"

#include <cmath>
#include <numbers>

#include "localitylab/errors.hpp"

namespace localitylab {

UnitVector3 sample_sphere(Rng& rng) {
  const double z = 2.0 * rng.uniform01() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.uniform01();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return UnitVector3(r * std::cos(phi), r * std::sin(phi), z);
}

double hoeffding_epsilon(std::uint64_t trials, double confidence) {
  if (trials == 0) throw DomainError("hoeffding_epsilon needs at least one trial");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("confidence must lie strictly between 0 and 1");
  }
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) /
                   (2.0 * static_cast<double>(trials)));
}

double tv_distance(const JointDistribution& p, const JointDistribution& q) {
  if (p.num_parties() != q.num_parties()) {
    throw DomainError("distributions live on different outcome spaces");
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
  return 0.5 * l1;
}

}  // namespace localitylab
