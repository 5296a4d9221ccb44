#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "localitylab/stats.hpp"
#include "localitylab/strategies.hpp"
#include "localitylab/unit_vector.hpp"

namespace localitylab {

struct ChshConfig {
  UnitVector3 m;
  UnitVector3 m_prime;
  UnitVector3 n;
  UnitVector3 n_prime;

  /// All four directions in the x-z plane at the given polar angles (radians).
  static ChshConfig in_plane(double m, double m_prime, double n, double n_prime);
};

using CorrelationFunction = std::function<double(const UnitVector3&, const UnitVector3&)>;

/// |E(m,n) + E(m,n')| + |E(m',n) - E(m',n')|
double chsh_value(const CorrelationFunction& E, const ChshConfig& cfg);

constexpr double chsh_combine(double e_mn, double e_mnp, double e_mpn, double e_mpnp) noexcept {
  const double a = e_mn + e_mnp;
  const double b = e_mpn - e_mpnp;
  return (a < 0 ? -a : a) + (b < 0 ? -b : b);
}

/// Exact singlet correlation, for use as a CorrelationFunction.
double oracle_singlet_correlation(const UnitVector3& m, const UnitVector3& n);

struct ChshScanResult {
  std::string source;
  double step = 0.0;            // radians
  std::vector<double> angles;   // grid, radians in [0, 2pi)
  Eigen::MatrixXd correlations; // (i, j) -> E(angles[i], angles[j])
  std::uint64_t trials_per_cell = 0;  // 0 for exact sources
  double epsilon = 0.0;         // per-cell Hoeffding half-width
  double max_value = 0.0;
  /// Maximising (m, m', n, n') in radians, each wrapped into (-pi, pi].
  std::array<double, 4> argmax{};

  /// Largest value a factorisable model may show at this confidence.
  double classical_bound() const noexcept { return 2.0 + 4.0 * epsilon; }
};

/// In-plane grid with `step` radians between angles. Throws DomainError
/// unless step > 0 divides 2 pi.
std::vector<double> angle_grid(double step);

/// Max over all (m, m', n, n') of the grid, given E on grid pairs. Ties go to
/// the first configuration in (m, m', n, n') lexicographic grid order.
void maximize_chsh(ChshScanResult& result);

ChshScanResult chsh_scan(const CorrelationFunction& E, double step, std::string source);

/// Scan of the exact singlet correlation.
ChshScanResult chsh_scan_oracle(double step);

/// Monte Carlo scan: cell (i, j) is estimated with `trials` runs on streams
/// starting at (i * grid + j) * trials.
ChshScanResult chsh_scan_strategy(const Strategy& strategy, double step, std::uint64_t trials,
                                  RngSeed seed, unsigned threads = 1);

struct GhzParityReport {
  std::string source;
  double v_xyy = 0.0;
  double v_yxy = 0.0;
  double v_yyx = 0.0;
  double v_xxx = 0.0;
  /// True when the three mixed expectations are +1, the inputs the
  /// factorisability argument starts from.
  bool premises_hold = false;
  int classical_prediction = 1;  // sign of v_xyy v_yxy v_yyx
  int quantum_prediction = 1;    // sign of v_xxx
  bool contradiction = false;    // premises_hold and the predictions differ
  double mermin_product = 0.0;   // v_xyy v_yxy v_yyx v_xxx
  /// All four values agree with the exact GHZ values within the tolerance.
  bool matches_quantum = false;
  double tolerance = 0.0;
};

using GhzExpectation = std::function<double(const PauliTriple&)>;

inline constexpr PauliTriple kGhzXYY{PauliAxis::X, PauliAxis::Y, PauliAxis::Y};
inline constexpr PauliTriple kGhzYXY{PauliAxis::Y, PauliAxis::X, PauliAxis::Y};
inline constexpr PauliTriple kGhzYYX{PauliAxis::Y, PauliAxis::Y, PauliAxis::X};
inline constexpr PauliTriple kGhzXXX{PauliAxis::X, PauliAxis::X, PauliAxis::X};

/// `tolerance` decides when a value counts as +1 / -1.
GhzParityReport ghz_parity(const GhzExpectation& v, std::string source, double tolerance);

GhzParityReport ghz_parity_oracle();

/// Exact when the strategy's hidden space is finite, otherwise estimated with
/// `trials` runs per triple and tolerance 3 epsilon.
GhzParityReport ghz_parity_strategy(const Strategy& strategy, std::uint64_t trials,
                                    RngSeed seed);

}  // namespace localitylab
