#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cmech {

enum class Errc {
  NonFinite,
  InvalidState,
  Collision,
  DimensionMismatch,
  NonElliptic,
  Rectilinear,
  Circular,
  InvalidElements,
  InvalidEccentricity,
  TriangleViolation,
  ZeroAngularMomentum,
  VerticalC,
  CoplanarOrbits,
  DomainViolation,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library. `level` names the induction level
/// (or ellipse index) that failed, when the operation has one; -1 otherwise.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, int level = -1);

  Errc code() const noexcept { return code_; }
  int level() const noexcept { return level_; }

 private:
  Errc code_;
  int level_;
};

/// True for errors that describe a point outside a chart's domain (as
/// opposed to malformed input).
bool is_degeneracy(Errc code);

}  // namespace cmech
