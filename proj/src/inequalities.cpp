#include "localitylab/inequalities.hpp"

#include <cmath>
#include <numbers>

#include "localitylab/errors.hpp"
#include "localitylab/qoracle.hpp"
#include "localitylab/runtime.hpp"

namespace localitylab {

namespace {

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::fmod(a, 2.0 * pi);
  if (a > pi + 1e-12) a -= 2.0 * pi;
  if (a <= -pi + 1e-12) a += 2.0 * pi;
  return a;
}

Settings triple_settings(const PauliTriple& t) { return Settings{t[0], t[1], t[2]}; }

}  // namespace

ChshConfig ChshConfig::in_plane(double m, double m_prime, double n, double n_prime) {
  return ChshConfig{UnitVector3::in_plane(m), UnitVector3::in_plane(m_prime),
                    UnitVector3::in_plane(n), UnitVector3::in_plane(n_prime)};
}

double chsh_value(const CorrelationFunction& E, const ChshConfig& c) {
  return chsh_combine(E(c.m, c.n), E(c.m, c.n_prime), E(c.m_prime, c.n),
                      E(c.m_prime, c.n_prime));
}

double oracle_singlet_correlation(const UnitVector3& m, const UnitVector3& n) {
  static const StateVector singlet = make_singlet();
  const std::vector<SingleQubitObservable> obs{spin_observable(m), spin_observable(n)};
  return joint_expectation(singlet, obs);
}

std::vector<double> angle_grid(double step) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (!(step > 0.0) || step > two_pi) throw DomainError("grid step must lie in (0, 2pi]");
  const double count = std::round(two_pi / step);
  if (std::abs(count * step - two_pi) > 1e-9) {
    throw DomainError("grid step must divide 360 degrees");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<double>(k) * step;
  return out;
}

void maximize_chsh(ChshScanResult& r) {
  const auto g = static_cast<Eigen::Index>(r.angles.size());
  const Eigen::MatrixXd& E = r.correlations;
  double best = -1.0;
  std::array<Eigen::Index, 4> arg{0, 0, 0, 0};
  for (Eigen::Index m = 0; m < g; ++m) {
    for (Eigen::Index mp = 0; mp < g; ++mp) {
      for (Eigen::Index n = 0; n < g; ++n) {
        for (Eigen::Index np = 0; np < g; ++np) {
          const double v = chsh_combine(E(m, n), E(m, np), E(mp, n), E(mp, np));
          if (v > best + 1e-12) {
            best = v;
            arg = {m, mp, n, np};
          }
        }
      }
    }
  }
  r.max_value = best;
  for (std::size_t k = 0; k < 4; ++k) {
    r.argmax[k] = wrap_angle(r.angles[static_cast<std::size_t>(arg[k])]);
  }
}

ChshScanResult chsh_scan(const CorrelationFunction& E, double step, std::string source) {
  ChshScanResult r;
  r.source = std::move(source);
  r.step = step;
  r.angles = angle_grid(step);
  const auto g = static_cast<Eigen::Index>(r.angles.size());
  r.correlations.resize(g, g);
  for (Eigen::Index i = 0; i < g; ++i) {
    const auto a = UnitVector3::in_plane(r.angles[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < g; ++j) {
      r.correlations(i, j) = E(a, UnitVector3::in_plane(r.angles[static_cast<std::size_t>(j)]));
    }
  }
  maximize_chsh(r);
  return r;
}

ChshScanResult chsh_scan_oracle(double step) {
  return chsh_scan(oracle_singlet_correlation, step, "oracle");
}

ChshScanResult chsh_scan_strategy(const Strategy& strategy, double step, std::uint64_t trials,
                                  RngSeed seed, unsigned threads) {
  if (strategy.spec().num_parties != 2) {
    throw CapabilityError("CHSH scans need a two-party strategy");
  }
  ChshScanResult r;
  r.source = strategy.spec().name;
  r.step = step;
  r.angles = angle_grid(step);
  r.trials_per_cell = trials;
  r.epsilon = hoeffding_epsilon(trials, kAuditConfidence);
  const std::size_t g = r.angles.size();
  r.correlations.resize(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(g));
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      const Settings s{UnitVector3::in_plane(r.angles[i]), UnitVector3::in_plane(r.angles[j])};
      const auto est = estimate_correlation(
          strategy, s, trials, seed,
          SimulationOptions{.first_stream = (i * g + j) * trials, .threads = threads});
      r.correlations(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = est.mean;
    }
  }
  maximize_chsh(r);
  return r;
}

GhzParityReport ghz_parity(const GhzExpectation& v, std::string source, double tolerance) {
  GhzParityReport r;
  r.source = std::move(source);
  r.tolerance = tolerance;
  r.v_xyy = v(kGhzXYY);
  r.v_yxy = v(kGhzYXY);
  r.v_yyx = v(kGhzYYX);
  r.v_xxx = v(kGhzXXX);
  auto near = [tolerance](double x, double target) { return std::abs(x - target) <= tolerance; };
  r.premises_hold = near(r.v_xyy, 1.0) && near(r.v_yxy, 1.0) && near(r.v_yyx, 1.0);
  r.classical_prediction = sign_of(r.v_xyy * r.v_yxy * r.v_yyx);
  r.quantum_prediction = sign_of(r.v_xxx);
  r.contradiction = r.premises_hold && r.classical_prediction != r.quantum_prediction;
  r.mermin_product = r.v_xyy * r.v_yxy * r.v_yyx * r.v_xxx;

  const auto ghz = make_ghz(3);
  const std::array<std::pair<double, PauliTriple>, 4> observed{
      {{r.v_xyy, kGhzXYY}, {r.v_yxy, kGhzYXY}, {r.v_yyx, kGhzYYX}, {r.v_xxx, kGhzXXX}}};
  r.matches_quantum = true;
  for (const auto& [value, t] : observed) {
    r.matches_quantum =
        r.matches_quantum && near(value, joint_expectation(ghz, triple_settings(t)));
  }
  return r;
}

GhzParityReport ghz_parity_oracle() {
  const auto ghz = make_ghz(3);
  return ghz_parity(
      [&ghz](const PauliTriple& t) { return joint_expectation(ghz, triple_settings(t)); },
      "oracle", 1e-9);
}

GhzParityReport ghz_parity_strategy(const Strategy& strategy, std::uint64_t trials,
                                    RngSeed seed) {
  const auto& spec = strategy.spec();
  if (spec.num_parties != 3 || spec.setting_kind != SettingKind::PauliOnly) {
    throw CapabilityError(spec.name + " cannot measure the GHZ Pauli triples");
  }
  if (!strategy.hidden_state_space().empty()) {
    return ghz_parity(
        [&strategy](const PauliTriple& t) {
          return enumerate_exact(strategy, triple_settings(t)).product_expectation();
        },
        spec.name, 1e-9);
  }
  std::uint64_t cell = 0;
  return ghz_parity(
      [&](const PauliTriple& t) {
        return estimate_correlation(strategy, triple_settings(t), trials, seed,
                                    SimulationOptions{.first_stream = (cell++) * trials})
            .mean;
      },
      spec.name, 3.0 * hoeffding_epsilon(trials, kAuditConfidence));
}

}  // namespace localitylab
