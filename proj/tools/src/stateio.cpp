#include "cmech_tools/stateio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "cmech/errors.hpp"

namespace cmech::io {

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::optional<Repr> parse_repr(std::string_view name) {
  if (name == "cartesian") return Repr::Cartesian;
  if (name == "jacobi") return Repr::Jacobi;
  if (name == "delaunay") return Repr::Delaunay;
  if (name == "deprit") return Repr::Deprit;
  return std::nullopt;
}

std::string_view to_string(Repr repr) {
  switch (repr) {
    case Repr::Cartesian: return "cartesian";
    case Repr::Jacobi: return "jacobi";
    case Repr::Delaunay: return "delaunay";
    case Repr::Deprit: return "deprit";
  }
  return "?";
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::vector<Record> tokenize(std::istream& in) {
  std::vector<Record> records;
  std::string text;
  for (std::size_t n = 1; std::getline(in, text); ++n) {
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream ss(text);
    Record r{n, {}};
    for (std::string tok; ss >> tok;) r.fields.push_back(tok);
    if (!r.fields.empty()) records.push_back(std::move(r));
  }
  return records;
}

double real(const Record& r, std::size_t i) {
  const std::string& s = r.fields.at(i);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("not a number: '" + s + "'", r.line);
  if (!std::isfinite(v)) throw ParseError("non-finite value: '" + s + "'", r.line);
  return v;
}

std::size_t index(const Record& r, std::size_t i) {
  const std::string& s = r.fields.at(i);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("not an index: '" + s + "'", r.line);
  return v;
}

void expect_fields(const Record& r, std::size_t count) {
  if (r.fields.size() != count)
    throw ParseError("'" + r.fields[0] + "' record needs " + std::to_string(count - 1) + " fields, got " +
                         std::to_string(r.fields.size() - 1),
                     r.line);
}

Vec3 vec(const Record& r, std::size_t first) { return {real(r, first), real(r, first + 1), real(r, first + 2)}; }

/// Collects indexed records and checks they are contiguous from `base`.
template <class T>
class Indexed {
 public:
  Indexed(std::string what, std::size_t base) : what_(std::move(what)), base_(base) {}

  void put(std::size_t i, T value, std::size_t line) {
    if (i < base_) throw ParseError(what_ + " index " + std::to_string(i) + " below " + std::to_string(base_), line);
    if (!items_.emplace(i, std::move(value)).second)
      throw ParseError("duplicate " + what_ + " " + std::to_string(i), line);
  }

  std::vector<T> contiguous(std::size_t expected) const {
    if (items_.size() != expected)
      throw ParseError("expected " + std::to_string(expected) + " " + what_ + " records, got " +
                       std::to_string(items_.size()));
    std::vector<T> out;
    for (std::size_t i = 0; i < expected; ++i) {
      const auto it = items_.find(base_ + i);
      if (it == items_.end()) throw ParseError("missing " + what_ + " " + std::to_string(base_ + i));
      out.push_back(it->second);
    }
    return out;
  }

 private:
  std::string what_;
  std::size_t base_;
  std::map<std::size_t, T> items_;
};

[[noreturn]] void unknown(const Record& r) { throw ParseError("unexpected record '" + r.fields[0] + "'", r.line); }

bool header_record(const Record& r, Indexed<double>& masses, std::optional<JacobiAnchor>& anchor) {
  if (r.fields[0] == "mass") {
    expect_fields(r, 3);
    const double m = real(r, 2);
    if (!(m > 0.0)) throw ParseError("mass must be positive", r.line);
    masses.put(index(r, 1), m, r.line);
    return true;
  }
  if (r.fields[0] == "anchor") {
    expect_fields(r, 7);
    if (anchor) throw ParseError("duplicate anchor", r.line);
    anchor = JacobiAnchor{vec(r, 4), vec(r, 1)};
    return true;
  }
  return false;
}

std::vector<double> mass_list(const Indexed<double>& masses, std::size_t count) {
  if (count < 2) throw ParseError("need at least two bodies");
  return masses.contiguous(count);
}

void write_masses(std::ostream& out, const std::vector<double>& masses) {
  for (std::size_t j = 0; j < masses.size(); ++j) out << "mass " << j << ' ' << format_real(masses[j]) << '\n';
}

void write_anchor(std::ostream& out, const std::optional<JacobiAnchor>& a) {
  if (!a) return;
  out << "anchor";
  for (double v : {a->Q0.x, a->Q0.y, a->Q0.z, a->P0.x, a->P0.y, a->P0.z}) out << ' ' << format_real(v);
  out << '\n';
}

void write_reals(std::ostream& out, std::initializer_list<double> values) {
  for (double v : values) out << ' ' << format_real(v);
  out << '\n';
}

std::size_t count_masses(const std::vector<Record>& recs) {
  std::size_t n = 0;
  for (const Record& r : recs) n += r.fields[0] == "mass";
  return n;
}

}  // namespace

PhaseState read_cartesian(std::istream& in) {
  const auto recs = tokenize(in);
  Indexed<double> masses("mass", 0);
  Indexed<Body> bodies("body", 0);
  std::optional<JacobiAnchor> anchor;
  for (const Record& r : recs) {
    if (r.fields[0] == "body") {
      expect_fields(r, 8);
      bodies.put(index(r, 1), Body{vec(r, 2), vec(r, 5)}, r.line);
    } else if (r.fields[0] == "mass") {
      header_record(r, masses, anchor);
    } else {
      unknown(r);
    }
  }
  PhaseState s;
  s.masses = mass_list(masses, count_masses(recs));
  s.bodies = bodies.contiguous(s.masses.size());
  return s;
}

Anchored read_jacobi(std::istream& in) {
  const auto recs = tokenize(in);
  Indexed<double> masses("mass", 0);
  Indexed<JacobiPair> pairs("jacobi", 1);
  Anchored a;
  for (const Record& r : recs) {
    if (header_record(r, masses, a.anchor)) continue;
    if (r.fields[0] != "jacobi") unknown(r);
    expect_fields(r, 8);
    pairs.put(index(r, 1), JacobiPair{vec(r, 5), vec(r, 2)}, r.line);
  }
  a.state.masses = mass_list(masses, count_masses(recs));
  a.state.pairs = pairs.contiguous(a.state.masses.size() - 1);
  return a;
}

DelaunayFile read_delaunay(std::istream& in) {
  const auto recs = tokenize(in);
  Indexed<double> masses("mass", 0);
  Indexed<DelaunayElements> elems("elem", 1);
  DelaunayFile d;
  for (const Record& r : recs) {
    if (header_record(r, masses, d.anchor)) continue;
    if (r.fields[0] != "elem") unknown(r);
    expect_fields(r, 8);
    DelaunayElements e;
    e.L = real(r, 2);
    e.l = real(r, 3);
    e.G = real(r, 4);
    e.g = real(r, 5);
    e.H = real(r, 6);
    e.h = real(r, 7);
    elems.put(index(r, 1), e, r.line);
  }
  d.masses = mass_list(masses, count_masses(recs));
  d.elements = elems.contiguous(d.masses.size() - 1);
  return d;
}

DepritFile read_deprit(std::istream& in) {
  const auto recs = tokenize(in);
  Indexed<double> masses("mass", 0);
  Indexed<EllipseBlock> ellipses("deprit ellipse", 1);
  Indexed<ChainPair> chain("deprit chain", 2);
  DepritFile d;
  bool total = false;
  for (const Record& r : recs) {
    if (header_record(r, masses, d.anchor)) continue;
    if (r.fields[0] != "deprit" || r.fields.size() < 2) unknown(r);
    const std::string& kind = r.fields[1];
    if (kind == "ellipse") {
      expect_fields(r, 7);
      ellipses.put(index(r, 2), EllipseBlock{real(r, 3), real(r, 4), real(r, 5), real(r, 6)}, r.line);
    } else if (kind == "chain") {
      expect_fields(r, 5);
      chain.put(index(r, 2), ChainPair{real(r, 3), real(r, 4)}, r.line);
    } else if (kind == "total") {
      expect_fields(r, 6);
      if (total) throw ParseError("duplicate 'deprit total'", r.line);
      total = true;
      d.state.Phi1 = real(r, 2);
      d.state.phi1 = real(r, 3);
      d.state.Phi2 = real(r, 4);
      d.state.phi2 = real(r, 5);
    } else {
      throw ParseError("unknown deprit record '" + kind + "'", r.line);
    }
  }
  if (!total) throw ParseError("missing 'deprit total' record");
  d.state.masses = mass_list(masses, count_masses(recs));
  if (d.state.masses.size() < 3) throw ParseError("Deprit variables need at least three bodies");
  const std::size_t n = d.state.masses.size() - 1;
  d.state.ellipses = ellipses.contiguous(n);
  d.state.chain = chain.contiguous(n - 2);
  return d;
}

void write_cartesian(std::ostream& out, const PhaseState& s) {
  write_masses(out, s.masses);
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Body& b = s.bodies[j];
    out << "body " << j;
    write_reals(out, {b.q.x, b.q.y, b.q.z, b.p.x, b.p.y, b.p.z});
  }
}

void write_jacobi(std::ostream& out, const Anchored& a) {
  write_masses(out, a.state.masses);
  write_anchor(out, a.anchor);
  for (std::size_t i = 1; i <= a.state.ellipses(); ++i) {
    const JacobiPair& p = a.state.pair(i);
    out << "jacobi " << i;
    write_reals(out, {p.Q.x, p.Q.y, p.Q.z, p.P.x, p.P.y, p.P.z});
  }
}

void write_delaunay(std::ostream& out, const DelaunayFile& d) {
  write_masses(out, d.masses);
  write_anchor(out, d.anchor);
  for (std::size_t i = 0; i < d.elements.size(); ++i) {
    const DelaunayElements& e = d.elements[i];
    out << "elem " << i + 1;
    write_reals(out, {e.L, e.l, e.G, e.g, e.H, e.h});
  }
}

void write_deprit(std::ostream& out, const DepritFile& d) {
  write_masses(out, d.state.masses);
  write_anchor(out, d.anchor);
  for (std::size_t i = 0; i < d.state.ellipses.size(); ++i) {
    const EllipseBlock& b = d.state.ellipses[i];
    out << "deprit ellipse " << i + 1;
    write_reals(out, {b.L, b.l, b.G, b.gbar});
  }
  for (std::size_t k = 0; k < d.state.chain.size(); ++k) {
    out << "deprit chain " << k + 2;
    write_reals(out, {d.state.chain[k].S, d.state.chain[k].psi});
  }
  out << "deprit total";
  write_reals(out, {d.state.Phi1, d.state.phi1, d.state.Phi2, d.state.phi2});
}

Anchored read_any(std::istream& in, Repr from) {
  switch (from) {
    case Repr::Cartesian: {
      const JacobiSplit split = to_jacobi(read_cartesian(in));
      return {split.state, split.anchor};
    }
    case Repr::Jacobi: {
      Anchored a = read_jacobi(in);
      validate(a.state);
      return a;
    }
    case Repr::Delaunay: {
      const DelaunayFile d = read_delaunay(in);
      Anchored a;
      a.state.masses = d.masses;
      a.anchor = d.anchor;
      for (std::size_t i = 1; i <= d.elements.size(); ++i) {
        const KeplerState k = delaunay_to_cartesian(d.elements[i - 1], a.state.reduced_mass(i), a.state.grav_parameter(i));
        a.state.pairs.push_back({k.P, k.Q});
      }
      return a;
    }
    case Repr::Deprit: {
      const DepritFile d = read_deprit(in);
      return {from_deprit_n(d.state), d.anchor};
    }
  }
  throw ParseError("unknown representation");
}

void write_any(std::ostream& out, const Anchored& a, Repr to, std::vector<std::string>& warnings) {
  switch (to) {
    case Repr::Cartesian:
      write_cartesian(out, from_jacobi(a.state, a.anchor));
      return;
    case Repr::Jacobi:
      write_jacobi(out, a);
      return;
    case Repr::Delaunay: {
      DelaunayFile d{a.state.masses, {}, a.anchor};
      for (std::size_t i = 1; i <= a.state.ellipses(); ++i) {
        const JacobiPair& p = a.state.pair(i);
        const DelaunayElements e = cartesian_to_delaunay(p.Q, p.P, a.state.reduced_mass(i), a.state.grav_parameter(i));
        const std::string where = "ellipse " + std::to_string(i) + ": ";
        if (e.flags.circular) warnings.push_back(where + "Circular (argument of pericentre set to 0)");
        if (e.flags.horizontal) warnings.push_back(where + "Horizontal (node longitude set to 0)");
        d.elements.push_back(e);
      }
      write_delaunay(out, d);
      return;
    }
    case Repr::Deprit:
      write_deprit(out, DepritFile{to_deprit_n(a.state), a.anchor});
      return;
  }
}

}  // namespace cmech::io
