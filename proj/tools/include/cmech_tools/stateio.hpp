#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cmech/deprit.hpp"
#include "cmech/jacobi.hpp"
#include "cmech/kepler.hpp"

namespace cmech::io {

/// Malformed input text; `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class Repr { Cartesian, Jacobi, Delaunay, Deprit };

std::optional<Repr> parse_repr(std::string_view name);
std::string_view to_string(Repr repr);

/// Jacobi coordinates with the optional dropped pair; the common hub for
/// every conversion.
struct Anchored {
  JacobiState state;
  std::optional<JacobiAnchor> anchor;
};

struct DelaunayFile {
  std::vector<double> masses;
  std::vector<DelaunayElements> elements;  // ellipse i at index i-1
  std::optional<JacobiAnchor> anchor;
};

struct DepritFile {
  DepritState state;
  std::optional<JacobiAnchor> anchor;
};

// Readers. Records:
//   mass <j> <m>
//   body <j> <qx> <qy> <qz> <px> <py> <pz>
//   anchor <Q0x> <Q0y> <Q0z> <P0x> <P0y> <P0z>
//   jacobi <i> <Qx> <Qy> <Qz> <Px> <Py> <Pz>
//   elem <i> <L> <l> <G> <g> <H> <h>
//   deprit ellipse <i> <L> <l> <G> <gbar>
//   deprit chain <k> <S> <psi>
//   deprit total <Phi1> <phi1> <Phi2> <phi2>
// Blank lines and anything after '#' are ignored.
PhaseState read_cartesian(std::istream& in);
Anchored read_jacobi(std::istream& in);
DelaunayFile read_delaunay(std::istream& in);
DepritFile read_deprit(std::istream& in);

// Writers; every real is printed with %.17g.
void write_cartesian(std::ostream& out, const PhaseState& state);
void write_jacobi(std::ostream& out, const Anchored& a);
void write_delaunay(std::ostream& out, const DelaunayFile& d);
void write_deprit(std::ostream& out, const DepritFile& d);

/// Parse any representation into the hub. Library errors (cmech::Error)
/// propagate unchanged.
Anchored read_any(std::istream& in, Repr from);

/// Write the hub in representation `to`. Degeneracy flags of the Delaunay
/// ellipses are appended to `warnings`.
void write_any(std::ostream& out, const Anchored& a, Repr to, std::vector<std::string>& warnings);

std::string format_real(double v);

}  // namespace cmech::io
