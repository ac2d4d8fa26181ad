#include "cmech/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cmech/deprit.hpp"
#include "cmech/errors.hpp"
#include "cmech/jacobi.hpp"

namespace cmech {
namespace {

double min_distance(const PhaseState& s) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < s.size(); ++j)
    for (std::size_t k = j + 1; k < s.size(); ++k) d = std::min(d, norm(s.bodies[j].q - s.bodies[k].q));
  return d;
}

void record(Trajectory& tr, double t, const PhaseState& s) {
  const Vec3 C = total_angular_momentum(s);
  const double c = norm(C);
  tr.times.push_back(t);
  tr.states.push_back(s);
  tr.energy.push_back(hamiltonian(s));
  tr.angular_momentum.push_back(C);
  tr.direction.push_back(c > 0.0 ? C / c : Vec3{});
}

void kick(PhaseState& s, const std::vector<Vec3>& f, double h) {
  for (std::size_t j = 0; j < s.size(); ++j) s.bodies[j].p += f[j] * h;
}

}  // namespace

double hamiltonian(const PhaseState& state) {
  validate(state);
  double kinetic = 0.0, potential = 0.0;
  for (std::size_t j = 0; j < state.size(); ++j) {
    const Vec3& p = state.bodies[j].p;
    kinetic += 0.5 * dot(p, p) / state.masses[j];
    for (std::size_t k = j + 1; k < state.size(); ++k)
      potential -= state.masses[j] * state.masses[k] / norm(state.bodies[j].q - state.bodies[k].q);
  }
  return kinetic + potential;
}

std::vector<Vec3> forces(const PhaseState& state) {
  std::vector<Vec3> f(state.size());
  for (std::size_t j = 0; j < state.size(); ++j)
    for (std::size_t k = j + 1; k < state.size(); ++k) {
      const Vec3 d = state.bodies[k].q - state.bodies[j].q;
      const double r = norm(d);
      if (!(r > 0.0)) throw Error(Errc::Collision, "bodies " + std::to_string(j) + " and " + std::to_string(k) + " coincide");
      const Vec3 fjk = d * (state.masses[j] * state.masses[k] / (r * r * r));
      f[j] += fjk;
      f[k] -= fjk;
    }
  return f;
}

Trajectory integrate(const PhaseState& state, double dt, std::size_t steps, std::size_t stride) {
  validate(state);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(Errc::InvalidState, "dt must be positive and finite");
  if (stride == 0) throw Error(Errc::InvalidState, "stride must be positive");
  const double threshold = kCollisionFraction * min_distance(state);

  Trajectory tr;
  PhaseState s = state;
  record(tr, 0.0, s);
  std::vector<Vec3> f = forces(s);
  for (std::size_t n = 1; n <= steps; ++n) {
    kick(s, f, 0.5 * dt);
    for (std::size_t j = 0; j < s.size(); ++j) s.bodies[j].q += s.bodies[j].p * (dt / s.masses[j]);
    if (!(min_distance(s) >= threshold)) {
      tr.collided = true;
      break;
    }
    f = forces(s);
    kick(s, f, 0.5 * dt);
    tr.steps_done = n;
    if (n % stride == 0 || n == steps) record(tr, static_cast<double>(n) * dt, s);
  }
  return tr;
}

std::string export_trajectory(const Trajectory& tr) {
  std::string out;
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!out.empty() && out.back() != '\n') out += ' ';
    out += buf;
  };
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const PhaseState& s = tr.states[i];
    put(tr.times[i]);
    for (const Body& b : s.bodies) { put(b.q.x); put(b.q.y); put(b.q.z); }
    for (const Body& b : s.bodies) { put(b.p.x); put(b.p.y); put(b.p.z); }
    put(tr.energy[i]);
    const Vec3& C = tr.angular_momentum[i];
    put(C.x); put(C.y); put(C.z);
    out += '\n';
  }
  return out;
}

DelaunayElements propagate_kepler(const DelaunayElements& d, double mu, double M, double t) {
  DelaunayElements out = d;
  if (t == 0.0) return out;
  const double n = mean_motion(d.L, mu, M);
  // Elapsed time reduced modulo one period.
  const double period = kTwoPi / n;
  const double r = std::fmod(t, period);
  out.l = wrap_angle(d.l + n * r);
  return out;
}

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(norm(cross(a, b)), dot(a, b)); }

InvarianceReport invariance_demo(const PhaseState& state, const Vec3& direction, double dt, std::size_t steps) {
  validate(state);
  const Vec3 C0 = total_angular_momentum(state);
  const double c0 = norm(C0);
  if (!(c0 > 0.0)) throw Error(Errc::ZeroAngularMomentum, "total angular momentum vanishes");
  if (!(norm(direction) > 0.0)) throw Error(Errc::InvalidState, "direction must be nonzero");
  if (angle_between(C0, direction) > kAlignmentTol)
    throw Error(Errc::InvalidState, "angular momentum is not along the requested direction");

  const Trajectory tr = integrate(state, dt, steps);
  InvarianceReport rep;
  rep.samples = tr.size();
  rep.collided = tr.collided;
  const double e0 = tr.energy.front();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    rep.max_angle = std::max(rep.max_angle, angle_between(tr.angular_momentum[i], direction));
    rep.max_c_norm_drift = std::max(rep.max_c_norm_drift, std::abs(norm(tr.angular_momentum[i]) - c0) / c0);
    rep.max_energy_drift = std::max(rep.max_energy_drift, std::abs(tr.energy[i] - e0) / std::abs(e0));
  }

  if (state.size() < 3) {
    rep.deprit_error = "Deprit variables need at least three bodies";
    return rep;
  }
  try {
    DepritDrift drift;
    const DepritState d0 = to_deprit_n(to_jacobi(tr.states.front()).state);
    for (const PhaseState& s : tr.states) {
      const DepritState d = to_deprit_n(to_jacobi(s).state);
      drift.Phi1 = std::max(drift.Phi1, std::abs(d.Phi1 - d0.Phi1));
      drift.Phi2 = std::max(drift.Phi2, std::abs(d.Phi2 - d0.Phi2));
      drift.phi2 = std::max(drift.phi2, std::abs(angle_difference(d.phi2, d0.phi2)));
      drift.phi1 = std::max(drift.phi1, std::abs(angle_difference(d.phi1, d0.phi1)));
      for (std::size_t i = 0; i < d.ellipses.size(); ++i) {
        drift.l = std::max(drift.l, std::abs(angle_difference(d.ellipses[i].l, d0.ellipses[i].l)));
        drift.gbar = std::max(drift.gbar, std::abs(angle_difference(d.ellipses[i].gbar, d0.ellipses[i].gbar)));
      }
    }
    rep.deprit = drift;
  } catch (const Error& e) {
    rep.deprit_error = e.what();
  }
  return rep;
}

}  // namespace cmech
