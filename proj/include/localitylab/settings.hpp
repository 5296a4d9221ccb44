#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "localitylab/unit_vector.hpp"

namespace localitylab {

enum class PauliAxis : std::uint8_t { I, X, Y, Z };

inline constexpr PauliAxis kPauliAxes[] = {PauliAxis::I, PauliAxis::X, PauliAxis::Y,
                                           PauliAxis::Z};

char to_char(PauliAxis axis) noexcept;
/// Accepts I, X, Y, Z in either case. Throws DomainError otherwise.
PauliAxis pauli_from_char(char c);

/// One party's measurement choice: a Pauli label or an arbitrary spin direction.
using MeasurementSetting = std::variant<PauliAxis, UnitVector3>;
using Settings = std::vector<MeasurementSetting>;

bool is_identity(const MeasurementSetting& s) noexcept;
bool is_pauli(const MeasurementSetting& s) noexcept;

/// Spin direction measured by `s`; X, Y, Z map to the coordinate axes and the
/// identity has none.
std::optional<UnitVector3> direction_of(const MeasurementSetting& s);

/// Pauli label of `s`. Throws CapabilityError for an arbitrary direction.
PauliAxis pauli_of(const MeasurementSetting& s);

/// "X", or "(0.6,0,0.8)" for a direction.
std::string describe(const MeasurementSetting& s);

/// Mask of parties whose setting is not the identity. Their outcome product
/// is the "combined outcome" of a run.
std::vector<bool> measured_parties(const Settings& settings);

}  // namespace localitylab
