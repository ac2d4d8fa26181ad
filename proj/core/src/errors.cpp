#include "cmech/errors.hpp"

namespace cmech {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidState: return "InvalidState";
    case Errc::Collision: return "Collision";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonElliptic: return "NonElliptic";
    case Errc::Rectilinear: return "Rectilinear";
    case Errc::Circular: return "Circular";
    case Errc::InvalidElements: return "InvalidElements";
    case Errc::InvalidEccentricity: return "InvalidEccentricity";
    case Errc::TriangleViolation: return "TriangleViolation";
    case Errc::ZeroAngularMomentum: return "ZeroAngularMomentum";
    case Errc::VerticalC: return "VerticalC";
    case Errc::CoplanarOrbits: return "CoplanarOrbits";
    case Errc::DomainViolation: return "DomainViolation";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what, int level)
    : std::runtime_error(std::string(to_string(code)) + ": " + what +
                         (level >= 0 ? " (level " + std::to_string(level) + ")" : "")),
      code_(code),
      level_(level) {}

bool is_degeneracy(Errc code) {
  switch (code) {
    case Errc::NonElliptic:
    case Errc::Rectilinear:
    case Errc::Circular:
    case Errc::TriangleViolation:
    case Errc::ZeroAngularMomentum:
    case Errc::VerticalC:
    case Errc::CoplanarOrbits:
    case Errc::Collision:
    case Errc::DomainViolation:
      return true;
    default:
      return false;
  }
}

}  // namespace cmech
