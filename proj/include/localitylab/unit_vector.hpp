#pragma once

#include <cmath>
#include <sstream>

#include <Eigen/Core>

#include "localitylab/errors.hpp"

namespace localitylab {

/// A direction on the Bloch sphere. Construction validates the norm, so any
/// value of this type can be dotted with another without renormalising.
template <typename Real>
class BasicUnitVector3 {
 public:
  using Vector = Eigen::Matrix<Real, 3, 1>;

  static constexpr Real kNormTolerance = Real(1e-9);

  BasicUnitVector3() : v_(Vector::UnitZ()) {}

  /// Throws InvariantError unless |v| = 1 within kNormTolerance.
  explicit BasicUnitVector3(const Vector& v) : v_(v) {
    const Real n2 = v_.squaredNorm();
    if (!std::isfinite(n2) || std::abs(n2 - Real(1)) > kNormTolerance) {
      std::ostringstream os;
      os << "not a unit vector: (" << v_.x() << ", " << v_.y() << ", " << v_.z()
         << "), squared norm " << n2;
      throw InvariantError(os.str());
    }
  }

  BasicUnitVector3(Real x, Real y, Real z) : BasicUnitVector3(Vector(x, y, z)) {}

  /// Rescales a nonzero vector onto the sphere.
  static BasicUnitVector3 normalized(const Vector& v) {
    const Real n = v.norm();
    if (!(n > Real(0)) || !std::isfinite(n)) {
      throw InvariantError("cannot normalise a zero or non-finite vector");
    }
    return BasicUnitVector3(Vector(v / n));
  }

  /// Direction at polar angle `theta` from +z inside the x-z plane. All the
  /// "in-plane angle" configurations in this library use this parametrisation.
  static BasicUnitVector3 in_plane(Real theta) {
    return BasicUnitVector3(Vector(std::sin(theta), Real(0), std::cos(theta)));
  }

  static BasicUnitVector3 x_axis() { return BasicUnitVector3(Vector::UnitX()); }
  static BasicUnitVector3 y_axis() { return BasicUnitVector3(Vector::UnitY()); }
  static BasicUnitVector3 z_axis() { return BasicUnitVector3(Vector::UnitZ()); }

  const Vector& vector() const noexcept { return v_; }
  Real x() const noexcept { return v_.x(); }
  Real y() const noexcept { return v_.y(); }
  Real z() const noexcept { return v_.z(); }

  Real dot(const BasicUnitVector3& o) const noexcept { return v_.dot(o.v_); }
  Real dot(const Vector& o) const noexcept { return v_.dot(o); }

  BasicUnitVector3 operator-() const { return BasicUnitVector3(Vector(-v_)); }

  friend bool operator==(const BasicUnitVector3& a, const BasicUnitVector3& b) {
    return a.v_ == b.v_;
  }

 private:
  Vector v_;
};

using UnitVector3 = BasicUnitVector3<double>;

/// sign(0) is +1; every response function in the library shares this rule.
template <typename Real>
constexpr int sign_of(Real x) noexcept {
  return x < Real(0) ? -1 : 1;
}

}  // namespace localitylab
