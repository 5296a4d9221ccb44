#pragma once

// Exact predictions for joint spin measurements on small pure states.
//
// Basis convention: |up> is index 0 and |down> is index 1 on every qubit, and
// qubit 0 (party a) is the most significant bit of a basis index.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Core>

#include "localitylab/errors.hpp"
#include "localitylab/joint_distribution.hpp"
#include "localitylab/settings.hpp"
#include "localitylab/stats.hpp"
#include "localitylab/unit_vector.hpp"

namespace localitylab {

inline constexpr std::size_t kMaxQubits = 10;

template <typename Real>
using Matrix2c = Eigen::Matrix<std::complex<Real>, 2, 2>;

template <typename Real>
using MatrixXc = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using VectorXc = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
Matrix2c<Real> sigma_x() {
  Matrix2c<Real> m;
  m << Real(0), Real(1), Real(1), Real(0);
  return m;
}

template <typename Real>
Matrix2c<Real> sigma_y() {
  using C = std::complex<Real>;
  Matrix2c<Real> m;
  m << C(0), C(0, -1), C(0, 1), C(0);
  return m;
}

template <typename Real>
Matrix2c<Real> sigma_z() {
  Matrix2c<Real> m;
  m << Real(1), Real(0), Real(0), Real(-1);
  return m;
}

/// Normalised amplitude vector over n qubits.
template <typename Real>
class BasicStateVector {
 public:
  using Complex = std::complex<Real>;
  using Amplitudes = VectorXc<Real>;

  static constexpr Real kNormTolerance = Real(1e-12);

  /// Throws SizeError for 0 or more than kMaxQubits qubits or a length other
  /// than 2^num_qubits, and InvariantError if the norm is not 1.
  BasicStateVector(std::size_t num_qubits, Amplitudes amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (num_qubits_ == 0 || num_qubits_ > kMaxQubits) {
      std::ostringstream os;
      os << "state must have between 1 and " << kMaxQubits << " qubits, got "
         << num_qubits_;
      throw SizeError(os.str());
    }
    if (static_cast<std::size_t>(amplitudes_.size()) != (std::size_t{1} << num_qubits_)) {
      throw SizeError("amplitude vector length must be 2^num_qubits");
    }
    const Real n2 = amplitudes_.squaredNorm();
    if (std::abs(n2 - Real(1)) > kNormTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "state is not normalised: squared norm " << n2;
      throw InvariantError(os.str());
    }
  }

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << num_qubits_; }
  const Amplitudes& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

 private:
  std::size_t num_qubits_;
  Amplitudes amplitudes_;
};

using StateVector = BasicStateVector<double>;

enum class ObservableKind { Identity, Spin };

/// Either the identity ("not measured") or a spin component along a direction.
template <typename Real>
class BasicObservable {
 public:
  static BasicObservable identity() {
    return BasicObservable(ObservableKind::Identity, std::nullopt,
                           Matrix2c<Real>::Identity());
  }

  /// x sigma_x + y sigma_y + z sigma_z.
  static BasicObservable spin(const BasicUnitVector3<Real>& d) {
    Matrix2c<Real> m = sigma_x<Real>() * d.x() + sigma_y<Real>() * d.y() +
                       sigma_z<Real>() * d.z();
    return BasicObservable(ObservableKind::Spin, d, m);
  }

  ObservableKind kind() const noexcept { return kind_; }
  const std::optional<BasicUnitVector3<Real>>& direction() const noexcept { return dir_; }
  const Matrix2c<Real>& matrix() const noexcept { return matrix_; }

  /// Projector onto the eigenspace of `outcome`. For the identity, +1 maps to
  /// I and -1 to the zero matrix.
  Matrix2c<Real> projector(Outcome outcome) const {
    if (kind_ == ObservableKind::Identity) {
      if (outcome == 1) return Matrix2c<Real>::Identity();
      return Matrix2c<Real>::Zero();
    }
    const Real s = outcome == 1 ? Real(1) : Real(-1);
    return (Matrix2c<Real>::Identity() + matrix_ * s) * Real(0.5);
  }

 private:
  BasicObservable(ObservableKind kind, std::optional<BasicUnitVector3<Real>> dir,
                  Matrix2c<Real> m)
      : kind_(kind), dir_(std::move(dir)), matrix_(std::move(m)) {}

  ObservableKind kind_;
  std::optional<BasicUnitVector3<Real>> dir_;
  Matrix2c<Real> matrix_;
};

using SingleQubitObservable = BasicObservable<double>;

template <typename Real>
BasicObservable<Real> spin_observable(const BasicUnitVector3<Real>& direction) {
  return BasicObservable<Real>::spin(direction);
}

/// Observable measured by a setting. Pauli labels map to sigma_x/y/z or I.
template <typename Real = double>
BasicObservable<Real> observable_for(const MeasurementSetting& s) {
  const auto d = direction_of(s);
  if (!d) return BasicObservable<Real>::identity();
  return BasicObservable<Real>::spin(BasicUnitVector3<Real>(
      Real(d->x()), Real(d->y()), Real(d->z())));
}

template <typename Real = double>
std::vector<BasicObservable<Real>> observables_for(const Settings& settings) {
  std::vector<BasicObservable<Real>> out;
  out.reserve(settings.size());
  for (const auto& s : settings) out.push_back(observable_for<Real>(s));
  return out;
}

/// (|up down> - |down up>) / sqrt 2.
template <typename Real = double>
BasicStateVector<Real> make_singlet() {
  const Real h = Real(1) / std::sqrt(Real(2));
  VectorXc<Real> a = VectorXc<Real>::Zero(4);
  a(1) = h;
  a(2) = -h;
  return BasicStateVector<Real>(2, std::move(a));
}

/// (|up...up> - |down...down>) / sqrt 2 on n qubits. Throws SizeError for
/// n < 2 or n > kMaxQubits.
template <typename Real = double>
BasicStateVector<Real> make_ghz(std::size_t n) {
  if (n < 2 || n > kMaxQubits) {
    std::ostringstream os;
    os << "GHZ state needs 2.." << kMaxQubits << " qubits, got " << n;
    throw SizeError(os.str());
  }
  const Real h = Real(1) / std::sqrt(Real(2));
  VectorXc<Real> a = VectorXc<Real>::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  a(0) = h;
  a(a.size() - 1) = -h;
  return BasicStateVector<Real>(n, std::move(a));
}

namespace detail {

/// In place: amplitudes <- (I (x) .. op on `qubit` .. (x) I) amplitudes.
template <typename Real>
void apply_local(VectorXc<Real>& amps, std::size_t num_qubits, std::size_t qubit,
                 const Matrix2c<Real>& op) {
  const std::size_t stride = std::size_t{1} << (num_qubits - 1 - qubit);
  const std::size_t dim = std::size_t{1} << num_qubits;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t off = 0; off < stride; ++off) {
      const auto i0 = static_cast<Eigen::Index>(base + off);
      const auto i1 = static_cast<Eigen::Index>(base + off + stride);
      const auto a0 = amps(i0);
      const auto a1 = amps(i1);
      amps(i0) = op(0, 0) * a0 + op(0, 1) * a1;
      amps(i1) = op(1, 0) * a0 + op(1, 1) * a1;
    }
  }
}

template <typename Real>
void check_arity(const BasicStateVector<Real>& state, std::size_t settings) {
  if (settings != state.num_qubits()) {
    std::ostringstream os;
    os << "state has " << state.num_qubits() << " qubits but " << settings
       << " settings were given";
    throw ArityError(os.str());
  }
}

}  // namespace detail

/// <psi| O_1 (x) ... (x) O_n |psi> for local 2x2 operators (not necessarily
/// Hermitian). Throws ArityError on a length mismatch.
template <typename Real>
std::complex<Real> local_product_expectation(const BasicStateVector<Real>& state,
                                             std::span<const Matrix2c<Real>> ops) {
  detail::check_arity(state, ops.size());
  VectorXc<Real> phi = state.amplitudes();
  for (std::size_t k = 0; k < ops.size(); ++k) {
    detail::apply_local(phi, state.num_qubits(), k, ops[k]);
  }
  return state.amplitudes().dot(phi);
}

/// <psi| O_1 (x) ... (x) O_n |psi>, real for these Hermitian observables.
template <typename Real>
Real joint_expectation(const BasicStateVector<Real>& state,
                       std::span<const BasicObservable<Real>> settings) {
  detail::check_arity(state, settings.size());
  std::vector<Matrix2c<Real>> ops;
  ops.reserve(settings.size());
  for (const auto& o : settings) ops.push_back(o.matrix());
  const auto e = local_product_expectation<Real>(state, ops);
  if (std::abs(e.imag()) > Real(1e-9)) {
    throw InvariantError("Hermitian expectation has a non-negligible imaginary part");
  }
  return e.real();
}

template <typename Real>
Real joint_expectation(const BasicStateVector<Real>& state,
                       const std::vector<BasicObservable<Real>>& settings) {
  return joint_expectation(state, std::span<const BasicObservable<Real>>(settings));
}

inline double joint_expectation(const StateVector& state, const Settings& settings) {
  return joint_expectation(state, observables_for<double>(settings));
}

/// P(s) = <psi| (x)_k P_k(s_k) |psi> for every outcome tuple s.
template <typename Real>
JointDistribution joint_distribution(const BasicStateVector<Real>& state,
                                     std::span<const BasicObservable<Real>> settings) {
  detail::check_arity(state, settings.size());
  const std::size_t n = state.num_qubits();
  std::vector<Matrix2c<Real>> plus(n), minus(n);
  for (std::size_t k = 0; k < n; ++k) {
    plus[k] = settings[k].projector(1);
    minus[k] = settings[k].projector(-1);
  }
  std::vector<double> p(std::size_t{1} << n);
  VectorXc<Real> phi;
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    phi = state.amplitudes();
    for (std::size_t k = 0; k < n; ++k) {
      const bool down = (idx >> (n - 1 - k)) & 1u;
      detail::apply_local(phi, n, k, down ? minus[k] : plus[k]);
    }
    const Real v = state.amplitudes().dot(phi).real();
    p[idx] = std::abs(v) < Real(1e-15) ? 0.0 : static_cast<double>(v);
  }
  return JointDistribution(n, std::move(p));
}

template <typename Real>
JointDistribution joint_distribution(const BasicStateVector<Real>& state,
                                     const std::vector<BasicObservable<Real>>& settings) {
  return joint_distribution(state, std::span<const BasicObservable<Real>>(settings));
}

inline JointDistribution joint_distribution(const StateVector& state,
                                            const Settings& settings) {
  return joint_distribution(state, observables_for<double>(settings));
}

/// Inverse-CDF draw from an exact table; zero-probability tuples are never
/// returned.
inline OutcomeTuple sample_from(const JointDistribution& dist, Rng& rng) {
  const double u = rng.uniform01();
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 0.0) continue;
    last_nonzero = i;
    cumulative += dist[i];
    if (u < cumulative) return JointDistribution::outcomes_at(dist.num_parties(), i);
  }
  return JointDistribution::outcomes_at(dist.num_parties(), last_nonzero);
}

template <typename Real>
OutcomeTuple sample_joint(const BasicStateVector<Real>& state,
                          std::span<const BasicObservable<Real>> settings, Rng& rng) {
  return sample_from(joint_distribution(state, settings), rng);
}

inline OutcomeTuple sample_joint(const StateVector& state, const Settings& settings,
                                 Rng& rng) {
  const auto obs = observables_for<double>(settings);
  return sample_joint(state, std::span<const SingleQubitObservable>(obs), rng);
}

/// -m.n, the singlet correlation for spin measurements along m and n.
template <typename Real>
Real singlet_correlation_closed_form(const BasicUnitVector3<Real>& m,
                                     const BasicUnitVector3<Real>& n) {
  return -m.dot(n);
}

/// Dense Kronecker product of 2x2 factors, factor 0 most significant.
template <typename Real>
MatrixXc<Real> kron(std::span<const Matrix2c<Real>> factors) {
  MatrixXc<Real> out = MatrixXc<Real>::Identity(1, 1);
  for (const auto& f : factors) {
    MatrixXc<Real> next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        next.template block<2, 2>(2 * r, 2 * c) = out(r, c) * f;
      }
    }
    out = std::move(next);
  }
  return out;
}

template <typename Real>
MatrixXc<Real> kron(std::initializer_list<Matrix2c<Real>> factors) {
  const std::vector<Matrix2c<Real>> v(factors);
  return kron<Real>(std::span<const Matrix2c<Real>>(v));
}

}  // namespace localitylab
