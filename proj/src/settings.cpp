#include "localitylab/settings.hpp"

#include <sstream>

#include "localitylab/errors.hpp"

namespace localitylab {

char to_char(PauliAxis axis) noexcept {
  switch (axis) {
    case PauliAxis::I: return 'I';
    case PauliAxis::X: return 'X';
    case PauliAxis::Y: return 'Y';
    case PauliAxis::Z: return 'Z';
  }
  return '?';
}

PauliAxis pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return PauliAxis::I;
    case 'X': case 'x': return PauliAxis::X;
    case 'Y': case 'y': return PauliAxis::Y;
    case 'Z': case 'z': return PauliAxis::Z;
    default: break;
  }
  throw DomainError(std::string("unknown Pauli axis '") + c + "'");
}

bool is_identity(const MeasurementSetting& s) noexcept {
  const auto* p = std::get_if<PauliAxis>(&s);
  return p != nullptr && *p == PauliAxis::I;
}

bool is_pauli(const MeasurementSetting& s) noexcept {
  return std::holds_alternative<PauliAxis>(s);
}

std::optional<UnitVector3> direction_of(const MeasurementSetting& s) {
  if (const auto* d = std::get_if<UnitVector3>(&s)) return *d;
  switch (std::get<PauliAxis>(s)) {
    case PauliAxis::X: return UnitVector3::x_axis();
    case PauliAxis::Y: return UnitVector3::y_axis();
    case PauliAxis::Z: return UnitVector3::z_axis();
    case PauliAxis::I: break;
  }
  return std::nullopt;
}

PauliAxis pauli_of(const MeasurementSetting& s) {
  if (const auto* p = std::get_if<PauliAxis>(&s)) return *p;
  throw CapabilityError("expected a Pauli setting, got direction " + describe(s));
}

std::string describe(const MeasurementSetting& s) {
  if (const auto* p = std::get_if<PauliAxis>(&s)) return std::string(1, to_char(*p));
  const auto& d = std::get<UnitVector3>(s);
  std::ostringstream os;
  os.precision(17);
  os << '(' << d.x() << ',' << d.y() << ',' << d.z() << ')';
  return os.str();
}

std::vector<bool> measured_parties(const Settings& settings) {
  std::vector<bool> mask(settings.size());
  for (std::size_t k = 0; k < settings.size(); ++k) mask[k] = !is_identity(settings[k]);
  return mask;
}

}  // namespace localitylab
