// Acceptance suite: one line per criterion, exit status 0 iff all pass.
//
//   acceptance <cmech-binary> <golden-dir> <data-dir> [--regenerate]

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cmech/catalog.hpp"
#include "cmech/deprit.hpp"
#include "cmech/dynamics.hpp"
#include "cmech/jacobi.hpp"
#include "cmech/kepler.hpp"
#include "cmech/sampling.hpp"
#include "cmech/symcheck.hpp"
#include "oracles.hpp"

using namespace cmech;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr std::size_t kSweep = 100;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void report(int id, const std::string& title, const Outcome& o, bool& all) {
  std::printf("criterion %d %s: %s [%s]\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str());
  std::fflush(stdout);
  all = all && o.pass;
}

Outcome chart_certification() {
  Outcome o;
  for (const char* name : {"jacobi3", "jacobi4", "delaunay-planar", "delaunay", "deprit3", "deprit4"}) {
    const ChartFamily& f = *find_family(name);
    const SweepResult r = certify_sweep([&](std::size_t i) { return draw_sample(f, kSeed, i); }, kSweep, 1e-6, 4);
    double antisym = 0.0;
    for (const SweepEntry& e : r.entries)
      antisym = std::max(antisym, (e.report.bracket_matrix + e.report.bracket_matrix.transpose()).cwiseAbs().maxCoeff());
    const bool ok = r.all_pass && r.worst_defect < 1e-6 && antisym < 1e-8;
    o.pass = o.pass && ok;
    o.detail += std::string(o.detail.empty() ? "" : ", ") + name + " worst=" + sci(r.worst_defect);
  }
  return o;
}

Outcome d_factor() {
  Outcome o;
  auto sweep = [&](const char* name, double want) {
    const ChartFamily& f = *find_family(name);
    double worst = 0.0;
    for (std::size_t i = 0; i < kSweep; ++i) {
      const ChartSample s = draw_sample(f, kSeed, i);
      worst = std::max(worst, std::abs(measure_d_factor(s.chart, s.point).D - want));
    }
    o.pass = o.pass && worst < 1e-6;
    o.detail += std::string(o.detail.empty() ? "" : ", ") + name + " max|D-" + (want == 1.0 ? "1" : "0.5") +
                "|=" + sci(worst);
  };
  sweep("delaunay", 1.0);
  sweep("deprit3", 1.0);
  sweep("deprit4", 1.0);
  sweep("deprit3-rescaled", 0.5);
  return o;
}

Outcome planar_brackets() {
  Rng rng(kSeed + 3);
  double worst = 0.0;
  for (std::size_t t = 0; t < kSweep; ++t) {
    const double mu = rng.uniform(0.5, 2), M = rng.uniform(0.5, 2);
    const KeplerState k = elements_to_cartesian(sample_planar_elements(rng, 1, 2), mu, M);
    Vector x(4);
    x << k.P.x, k.P.y, k.Q.x, k.Q.y;
    const Chart c = planar_delaunay_chart(mu, M);
    const Observable L = chart_component(c, 0), G = chart_component(c, 1), l = chart_component(c, 2),
                     g = chart_component(c, 3);
    const double got[6] = {bracket(L, l, x), bracket(G, g, x), bracket(L, G, x),
                           bracket(L, g, x), bracket(G, l, x), bracket(l, g, x)};
    const double want[6] = {1, 1, 0, 0, 0, 0};
    for (int i = 0; i < 6; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  }
  return {worst < 1e-6, "max deviation from {L,l}={G,g}=1, 0 otherwise = " + sci(worst)};
}

Outcome nodes() {
  double sum = 0.0;
  std::size_t grid = 0;
  for (int a = 1; a <= 30; ++a)
    for (int b = 1; b <= 30; ++b)
      for (int c = 0; c <= 10; ++c) {
        const double G1 = 0.17 * a, G2 = 0.11 * b;
        const double lo = std::abs(G1 - G2), hi = G1 + G2;
        const double C = lo + (hi - lo) * (0.001 + 0.998 * c / 10.0);
        const NodesResult h = eliminate_nodes(G1, G2, C);
        sum = std::max(sum, std::abs(h.H1 + h.H2 - C) / std::max({C, std::abs(h.H1), std::abs(h.H2)}));
        ++grid;
      }
  Rng rng(kSeed + 4);
  double geo = 0.0;
  for (std::size_t t = 0; t < kSweep; ++t) {
    const JacobiState j = sample_jacobi_state(rng, 3);
    const AngularMomenta am = angular_momenta(j);
    const Vec3 Ch = normalized(am.total);
    const double G1 = norm(am.per_ellipse[0]), G2 = norm(am.per_ellipse[1]);
    const NodesResult h = eliminate_nodes(G1, G2, norm(am.total));
    geo = std::max({geo, std::abs(G1 * dot(normalized(am.per_ellipse[0]), Ch) - h.H1),
                    std::abs(G2 * dot(normalized(am.per_ellipse[1]), Ch) - h.H2)});
  }
  return {sum <= 1e-15 && geo < 1e-10,
          "grid=" + std::to_string(grid) + " max|H1+H2-C|/max(C,|H1|,|H2|)=" + sci(sum) + ", geometric max dev=" + sci(geo)};
}

Outcome round_trips() {
  Rng rng(kSeed + 5);
  double cj = 0.0, cd = 0.0, d3 = 0.0, d4 = 0.0;
  for (std::size_t t = 0; t < kSweep; ++t) {
    for (std::size_t n : {3u, 4u}) {
      PhaseState s = sample_phase_state(rng, n);
      for (Body& b : s.bodies) {
        b.q += Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        b.p += Vec3{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
      }
      const JacobiSplit j = to_jacobi(s);
      cj = std::max(cj, oracle::rel_diff(flatten(from_jacobi(j.state, j.anchor)), flatten(s)));
    }
    const double mu = rng.uniform(0.5, 2), M = rng.uniform(0.5, 2);
    const KeplerState k = elements_to_cartesian(sample_elements(rng, 1, 2), mu, M);
    const KeplerState back = delaunay_to_cartesian(cartesian_to_delaunay(k.Q, k.P, mu, M), mu, M);
    Vector a(6), b(6);
    a << k.P.x, k.P.y, k.P.z, k.Q.x, k.Q.y, k.Q.z;
    b << back.P.x, back.P.y, back.P.z, back.Q.x, back.Q.y, back.Q.z;
    cd = std::max(cd, oracle::rel_diff(b, a));
    const JacobiState j3 = sample_jacobi_state(rng, 3), j4 = sample_jacobi_state(rng, 4);
    d3 = std::max(d3, oracle::rel_diff(reduced_vector(from_deprit(to_deprit(j3))), reduced_vector(j3)));
    d4 = std::max(d4, oracle::rel_diff(reduced_vector(from_deprit_n(to_deprit_n(j4))), reduced_vector(j4)));
  }
  return {cj < 1e-12 && cd < 1e-10 && d3 < 1e-9 && d4 < 1e-8,
          "cartesian-jacobi=" + sci(cj) + " cartesian-delaunay=" + sci(cd) + " jacobi-deprit N=3 " + sci(d3) +
              " N=4 " + sci(d4)};
}

Outcome cross_section() {
  Rng rng(kSeed + 6);
  std::vector<JacobiState> pts;
  const Mat3 R = random_rotation(rng);
  const Vec3 dir = R * Vec3{0, 0, 1};
  for (int t = 0; t < 20; ++t) pts.push_back(sample_jacobi_state_along(rng, 3, dir));
  const CrossSectionReport r = check_cross_section(pts, dir, 1e-6);
  const std::vector<std::size_t> q1xy{6, 7};
  const CrossSectionReport neg = check_coordinate_section(pts, q1xy, 1e-6);
  return {r.pass && r.min_rank == r.tangent_dim && r.min_singular > 1e-6 && !neg.pass,
          "tangent dim=" + std::to_string(r.tangent_dim) + " min rank=" + std::to_string(r.min_rank) +
              " min sigma=" + sci(r.min_singular) + "; control (Q1x,Q1y fixed) rank=" + std::to_string(neg.min_rank) +
              "/" + std::to_string(neg.tangent_dim) + (neg.pass ? " passes (unexpected)" : " fails")};
}

Outcome invariance() {
  Rng rng(kSeed + 7);
  const Vec3 dir = normalized(Vec3{0.35, -0.2, 0.9});
  const PhaseState s = from_jacobi(sample_jacobi_state_along(rng, 3, dir));
  const InvarianceReport r = invariance_demo(s, dir, 0.01, 10000);
  if (!r.deprit) return {false, "Deprit variables unavailable: " + r.deprit_error};
  const DepritDrift& d = *r.deprit;
  const double fixed = std::max({d.Phi1, d.Phi2, d.phi2});
  const double vary = std::min({d.l, d.gbar, d.phi1});
  return {r.max_angle < 1e-10 && fixed < 1e-8 && vary > 1e-6 && !r.collided,
          "angle=" + sci(r.max_angle) + " rad, max drift of (Phi1,Phi2,phi2)=" + sci(fixed) +
              ", min variation of (l,gbar,phi1)=" + sci(vary)};
}

Outcome kepler() {
  double residual = 0.0;
  for (int i = 0; i < 40; ++i)
    for (int k = 0; k < 25; ++k) {
      const double M = -4.0 + 12.0 * i / 39.0, e = 0.99 * k / 24.0;
      const double E = solve_kepler(M, e);
      residual = std::max(residual, std::abs(std::remainder(E - e * std::sin(E) - M, kTwoPi)));
    }
  Rng rng(kSeed + 8);
  const std::vector<double> m = sample_masses(rng, 2);
  const double Mg = m[0] + m[1], mu = m[0] * m[1] / Mg;
  const KeplerState k = elements_to_cartesian(sample_elements(rng, 1, 2), mu, Mg);
  const DelaunayElements d0 = cartesian_to_delaunay(k.Q, k.P, mu, Mg);
  PhaseState s;
  s.masses = m;
  s.bodies = {Body{-k.Q * (m[1] / Mg), -k.P}, Body{k.Q * (m[0] / Mg), k.P}};
  const double T = kTwoPi / mean_motion(d0.L, mu, Mg);
  const std::size_t steps = 20000;
  const Trajectory tr = integrate(s, T / steps, steps, steps);
  const PhaseState& e = tr.states.back();
  const DelaunayElements d1 = cartesian_to_delaunay(e.bodies[1].q - e.bodies[0].q, e.bodies[1].p, mu, Mg);
  const DelaunayElements w = propagate_kepler(d0, mu, Mg, tr.times.back());
  const double dev = std::max({std::abs(d1.L - w.L), std::abs(d1.G - w.G), std::abs(d1.H - w.H),
                               std::abs(angle_difference(d1.l, w.l)), std::abs(angle_difference(d1.g, w.g)),
                               std::abs(angle_difference(d1.h, w.h))});
  return {residual < 1e-13 && dev < 1e-6,
          "grid=1000 max residual=" + sci(residual) + ", propagate vs leapfrog (T/20000) after one period=" + sci(dev)};
}

// ---- CLI golden files --------------------------------------------------

struct Case {
  std::string name;
  int exit_code = 0;
  std::string stderr_needle;
  std::string args;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<Case> load_cases(const fs::path& file) {
  std::ifstream in(file);
  std::vector<Case> cases;
  for (std::string line; std::getline(in, line);) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    for (std::string p; std::getline(ss, p, '|');) parts.push_back(trim(p));
    if (parts.size() != 4) throw std::runtime_error("bad golden case line: " + line);
    cases.push_back({parts[0], std::stoi(parts[1]), parts[2] == "-" ? "" : parts[2], parts[3]});
  }
  return cases;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code = -1;
  std::string out, err;
};

Run invoke(const std::string& binary, const std::string& args, const fs::path& scratch) {
  const fs::path out = scratch / "stdout", err = scratch / "stderr";
  const std::string cmd = "'" + binary + "' " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

Outcome cli_golden(const std::string& binary, const fs::path& golden, const fs::path& data, bool regenerate) {
  const fs::path scratch = fs::temp_directory_path() / ("cmech_golden_" + std::to_string(::getpid()));
  fs::create_directories(scratch);
  Outcome o;
  std::size_t checked = 0;
  std::vector<std::string> failures;
  for (const Case& c : load_cases(golden / "cases.txt")) {
    std::string args = c.args;
    for (std::size_t at; (at = args.find("@DATA@")) != std::string::npos;) args.replace(at, 6, data.string());
    for (std::size_t at; (at = args.find("@TMP@")) != std::string::npos;) args.replace(at, 5, scratch.string());
    const Run a = invoke(binary, args, scratch), b = invoke(binary, args, scratch);
    const fs::path expected = golden / (c.name + ".out");
    if (regenerate) {
      std::ofstream(expected, std::ios::binary) << a.out;
    }
    std::string why;
    if (a.code != c.exit_code) why += " exit " + std::to_string(a.code) + " != " + std::to_string(c.exit_code);
    if (a.out != b.out || a.err != b.err || a.code != b.code) why += " nondeterministic";
    if (!fs::exists(expected)) why += " missing golden file";
    else if (slurp(expected) != a.out) why += " stdout differs from golden";
    if (!c.stderr_needle.empty() && a.err.find(c.stderr_needle) == std::string::npos)
      why += " stderr lacks '" + c.stderr_needle + "'";
    if (!why.empty()) failures.push_back(c.name + ":" + why);
    ++checked;
  }
  fs::remove_all(scratch);
  o.pass = failures.empty() && checked > 0;
  o.detail = std::to_string(checked) + " golden cases, " + std::to_string(failures.size()) + " failed";
  for (const std::string& f : failures) o.detail += "; " + f;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::fprintf(stderr, "usage: %s <cmech-binary> <golden-dir> <data-dir> [--regenerate]\n", argv[0]);
    return 2;
  }
  const bool regenerate = argc > 4 && std::string(argv[4]) == "--regenerate";
  const auto start = std::chrono::steady_clock::now();
  bool all = true;
  auto guarded = [&](int id, const std::string& title, Outcome (*fn)()) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(id, title, o, all);
  };
  guarded(1, "chart certification, defect < 1e-6 on 100 points per chart", chart_certification);
  guarded(2, "D factor = 1 +- 1e-6, rescaled control = 0.5 +- 1e-6", d_factor);
  guarded(3, "planar Delaunay bracket table to 1e-6 on 100 points", planar_brackets);
  guarded(4, "elimination of nodes: H1+H2=C to 1e-15, geometric H_i to 1e-10", nodes);
  guarded(5, "round trips 1e-12 / 1e-10 / 1e-9 / 1e-8", round_trips);
  guarded(6, "fixed-direction cross-section nondegenerate at 20 points, control degenerate", cross_section);
  guarded(7, "invariance demo over 1e4 leapfrog steps", invariance);
  guarded(8, "Kepler residual < 1e-13, propagate_kepler vs integrator < 1e-6", kepler);
  Outcome golden;
  try {
    golden = cli_golden(argv[1], argv[2], argv[3], regenerate);
  } catch (const std::exception& e) {
    golden = {false, std::string("exception: ") + e.what()};
  }
  report(9, "CLI determinism and exit codes against golden files", golden, all);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("acceptance %s (%.1f s)\n", all ? "PASS" : "FAIL", secs);
  return all ? 0 : 1;
}
