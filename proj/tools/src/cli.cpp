#include "cmech_tools/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "cmech/catalog.hpp"
#include "cmech/deprit.hpp"
#include "cmech/dynamics.hpp"
#include "cmech/errors.hpp"
#include "cmech/symcheck.hpp"
#include "cmech_tools/stateio.hpp"

namespace cmech::cli {
namespace {

/// Raised for bad flags, unreadable files and similar usage problems.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g17(double v) { return io::format_real(v); }

double default_tolerance() {
  const char* env = std::getenv("CMECH_TOL");
  if (!env || !*env) return kCertifyTol;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (*end != '\0' || !(v > 0.0) || !std::isfinite(v)) throw UsageError("CMECH_TOL is not a positive number: " + std::string(env));
  return v;
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f || !(f << text)) throw UsageError("cannot write '" + path + "'");
}

io::Repr repr_option(const std::string& name) {
  const auto r = io::parse_repr(name);
  if (!r) throw UsageError("unknown representation '" + name + "'");
  return *r;
}

struct ConvertArgs {
  std::string from = "cartesian", to = "jacobi", in = "-", out = "-";
};

int cmd_convert(const ConvertArgs& a, std::ostream& out, std::ostream& err) {
  const io::Repr from = repr_option(a.from), to = repr_option(a.to);
  std::istringstream in(read_text(a.in));
  const io::Anchored hub = io::read_any(in, from);
  std::ostringstream text;
  std::vector<std::string> warnings;
  io::write_any(text, hub, to, warnings);
  for (const std::string& w : warnings) err << "warning: " << w << '\n';
  write_text(a.out, text.str(), out);
  return kSuccess;
}

struct VerifyArgs {
  std::string chart;
  std::size_t points = 100;
  std::uint64_t seed = 7;
  std::optional<double> tol;
  unsigned threads = 1;
  bool table = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const ChartFamily* family = find_family(a.chart);
  if (!family) throw UsageError("unknown chart '" + a.chart + "'");
  const double tol = a.tol ? *a.tol : default_tolerance();
  if (!(tol > 0.0)) throw UsageError("--tol must be positive");

  const SweepResult sweep = certify_sweep(
      [&](std::size_t i) { return draw_sample(*family, a.seed, i); }, a.points, tol, std::max(1u, a.threads));

  bool pass = sweep.all_pass;
  double d_min = std::numeric_limits<double>::infinity(), d_max = -d_min;
  for (const SweepEntry& e : sweep.entries) {
    out << "point=" << e.index << ' ' << machine_line(e.report, a.seed) << '\n';
    if (a.table) out << format_bracket_table(e.report);
    if (e.d_factor) {
      out << "D=" << fmt("%.6f", e.d_factor->D) << '\n';
      d_min = std::min(d_min, e.d_factor->D);
      d_max = std::max(d_max, e.d_factor->D);
      if (!(std::abs(e.d_factor->D - 1.0) < tol)) pass = false;
    }
  }
  out << "chart=" << family->name << " points=" << a.points << " seed=" << a.seed << " tol=" << fmt("%.3g", tol)
      << " worst_defect=" << fmt("%.6e", sweep.worst_defect);
  if (d_min <= d_max) out << " D_min=" << fmt("%.9f", d_min) << " D_max=" << fmt("%.9f", d_max);
  out << " result=" << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kSuccess : kVerificationFailure;
}

int cmd_charts(std::ostream& out) {
  for (const ChartFamily& f : chart_families())
    out << f.name << (f.canonical ? "" : " (negative control)") << ": " << f.description << '\n';
  return kSuccess;
}

struct PropagateArgs {
  std::string in = "-", out = "-";
  double dt = 0.01;
  std::size_t steps = 1000;
  std::size_t stride = 1;
};

PhaseState read_state(const std::string& path) {
  std::istringstream in(read_text(path));
  return io::read_cartesian(in);
}

int cmd_propagate(const PropagateArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.dt > 0.0)) throw UsageError("--dt must be positive");
  if (a.stride == 0) throw UsageError("--stride must be positive");
  const Trajectory tr = integrate(read_state(a.in), a.dt, a.steps, a.stride);
  write_text(a.out, export_trajectory(tr), out);
  if (tr.collided) {
    err << "error: Collision: close encounter after " << tr.steps_done << " steps; trajectory truncated\n";
    return kDomain;
  }
  return kSuccess;
}

struct DemoArgs {
  std::string in = "-";
  double dt = 0.01;
  std::size_t steps = 10000;
  std::vector<double> direction;
};

int cmd_demo(const DemoArgs& a, std::ostream& out) {
  if (!(a.dt > 0.0)) throw UsageError("--dt must be positive");
  const PhaseState s = read_state(a.in);
  Vec3 dir = total_angular_momentum(s);
  if (!a.direction.empty()) dir = {a.direction[0], a.direction[1], a.direction[2]};
  const InvarianceReport r = invariance_demo(s, dir, a.dt, a.steps);
  out << "samples=" << r.samples << '\n'
      << "max_direction_deviation_rad=" << fmt("%.6e", r.max_angle) << '\n'
      << "max_C_norm_drift=" << fmt("%.6e", r.max_c_norm_drift) << '\n'
      << "max_energy_drift=" << fmt("%.6e", r.max_energy_drift) << '\n';
  if (r.deprit) {
    const DepritDrift& d = *r.deprit;
    out << "Phi1_drift=" << fmt("%.6e", d.Phi1) << '\n'
        << "Phi2_drift=" << fmt("%.6e", d.Phi2) << '\n'
        << "phi2_drift=" << fmt("%.6e", d.phi2) << '\n'
        << "l_variation=" << fmt("%.6e", d.l) << '\n'
        << "gbar_variation=" << fmt("%.6e", d.gbar) << '\n'
        << "phi1_variation=" << fmt("%.6e", d.phi1) << '\n';
  } else {
    out << "deprit=unavailable (" << r.deprit_error << ")\n";
  }
  if (r.collided) throw Error(Errc::Collision, "close encounter during the demo");
  const bool pass = r.max_angle < kInvarianceTol;
  out << "invariant=" << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kSuccess : kVerificationFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Canonical coordinates of the N-body problem and symplectic chart certification", "cmech"};
  app.require_subcommand(1);

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "Convert a state between cartesian, jacobi, delaunay and deprit");
  const std::vector<std::string> reprs{"cartesian", "jacobi", "delaunay", "deprit"};
  convert->add_option("--from", conv.from, "Input representation")->check(CLI::IsMember(reprs));
  convert->add_option("--to", conv.to, "Output representation")->check(CLI::IsMember(reprs));
  convert->add_option("--in", conv.in, "Input file, '-' for stdin");
  convert->add_option("--out", conv.out, "Output file, '-' for stdout");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Certify a chart family on seeded random points");
  verify->add_option("--chart", ver.chart, "Chart family (see 'charts')")->required();
  verify->add_option("--points", ver.points, "Number of points")->check(CLI::PositiveNumber);
  verify->add_option("--seed", ver.seed, "Sweep seed");
  verify->add_option("--tol", ver.tol, "Defect tolerance (default 1e-6 or $CMECH_TOL)");
  verify->add_option("--threads", ver.threads, "Worker threads; output does not depend on it");
  verify->add_flag("--table", ver.table, "Print the bracket matrix of every point");

  auto* charts = app.add_subcommand("charts", "List the chart families known to 'verify'");

  double G1 = 0, G2 = 0, C = 0;
  auto* nodes = app.add_subcommand("nodes", "Elimination of the nodes: H1, H2 from G1, G2, C");
  nodes->add_option("--G1", G1)->required();
  nodes->add_option("--G2", G2)->required();
  nodes->add_option("--C", C)->required();

  double M = 0, e = 0;
  auto* kepler = app.add_subcommand("kepler", "Solve the Kepler equation for the eccentric anomaly");
  kepler->add_option("--M", M, "Mean anomaly")->required();
  kepler->add_option("--e", e, "Eccentricity")->required();

  PropagateArgs prop;
  auto* propagate = app.add_subcommand("propagate", "Leapfrog integration; prints one sample per line");
  propagate->add_option("--in", prop.in, "Cartesian state file, '-' for stdin");
  propagate->add_option("--out", prop.out, "Trajectory file, '-' for stdout");
  propagate->add_option("--dt", prop.dt, "Time step");
  propagate->add_option("--steps", prop.steps, "Number of steps");
  propagate->add_option("--stride", prop.stride, "Record every stride-th step");

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo-invariance", "Check that the direction of C is invariant under the flow");
  demo_cmd->add_option("--in", demo.in, "Cartesian state file, '-' for stdin");
  demo_cmd->add_option("--dt", demo.dt, "Time step");
  demo_cmd->add_option("--steps", demo.steps, "Number of steps");
  demo_cmd->add_option("--direction", demo.direction, "Expected direction of C (default: C of the input)")
      ->expected(3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*convert) return cmd_convert(conv, out, err);
    if (*verify) return cmd_verify(ver, out);
    if (*charts) return cmd_charts(out);
    if (*nodes) {
      const NodesResult h = eliminate_nodes(G1, G2, C);
      out << "H1=" << g17(h.H1) << " H2=" << g17(h.H2) << '\n';
      return kSuccess;
    }
    if (*kepler) {
      const double E = solve_kepler(M, e);
      out << "E=" << g17(E) << '\n';
      return kSuccess;
    }
    if (*propagate) return cmd_propagate(prop, out, err);
    if (*demo_cmd) return cmd_demo(demo, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const io::ParseError& ex) {
    err << "error: parse: " << ex.what() << '\n';
    return kUsage;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kDomain;
  }
  return kUsage;
}

}  // namespace cmech::cli
