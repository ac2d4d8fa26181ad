#include "cmech/sampling.hpp"

#include <cmath>

#include "cmech/deprit.hpp"
#include "cmech/errors.hpp"

namespace cmech {

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

Rng Rng::for_index(std::uint64_t seed, std::uint64_t index) {
  Rng mix(seed ^ (0xd1b54a32d192ed03ULL * (index + 1)));
  return Rng(mix.next_u64());
}

Mat3 random_rotation(Rng& rng) {
  // Uniform unit quaternion (Shoemake).
  const double u1 = rng.uniform(), u2 = rng.angle(), u3 = rng.angle();
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  const double w = a * std::sin(u2), x = a * std::cos(u2), y = b * std::sin(u3), z = b * std::cos(u3);
  Mat3 r;
  r(0, 0) = 1 - 2 * (y * y + z * z);
  r(0, 1) = 2 * (x * y - z * w);
  r(0, 2) = 2 * (x * z + y * w);
  r(1, 0) = 2 * (x * y + z * w);
  r(1, 1) = 1 - 2 * (x * x + z * z);
  r(1, 2) = 2 * (y * z - x * w);
  r(2, 0) = 2 * (x * z - y * w);
  r(2, 1) = 2 * (y * z + x * w);
  r(2, 2) = 1 - 2 * (x * x + y * y);
  return r;
}

std::vector<double> sample_masses(Rng& rng, std::size_t bodies) {
  std::vector<double> m(bodies);
  for (double& mk : m) mk = rng.uniform(0.5, 2.0);
  return m;
}

OrbitalElements sample_elements(Rng& rng, double a_min, double a_max) {
  OrbitalElements el;
  el.a = rng.uniform(a_min, a_max);
  el.e = rng.uniform(kSampleMargin, kSampleMaxEccentricity);
  // cos(i) uniform, rejected where sin(i) <= margin
  do {
    el.inclination = std::acos(rng.uniform(-1.0, 1.0));
  } while (std::sin(el.inclination) <= kSampleMargin);
  el.arg_pericenter = rng.angle();
  el.node = rng.angle();
  el.mean_anomaly = rng.angle();
  return el;
}

OrbitalElements sample_planar_elements(Rng& rng, double a_min, double a_max) {
  OrbitalElements el;
  el.a = rng.uniform(a_min, a_max);
  el.e = rng.uniform(kSampleMargin, kSampleMaxEccentricity);
  el.arg_pericenter = rng.angle();
  el.mean_anomaly = rng.angle();
  el.flags.horizontal = true;
  return el;
}

namespace {

JacobiState draw_hierarchy(Rng& rng, std::size_t bodies) {
  JacobiState j;
  j.masses = sample_masses(rng, bodies);
  // Each outer orbit is 3.5-5.5 times wider than the previous one.
  double a = rng.uniform(1.0, 1.5);
  for (std::size_t i = 1; i < bodies; ++i) {
    OrbitalElements el = sample_elements(rng, a, a);
    el.e = rng.uniform(kSampleMargin + 0.01, kSampleMaxEccentricity);
    const KeplerState s = elements_to_cartesian(el, j.reduced_mass(i), j.grav_parameter(i));
    j.pairs.push_back({s.P, s.Q});
    a *= rng.uniform(3.5, 5.5);
  }
  return j;
}

}  // namespace

JacobiState sample_jacobi_state(Rng& rng, std::size_t bodies) {
  if (bodies < 3) throw Error(Errc::InvalidState, "sample_jacobi_state needs at least three bodies");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    JacobiState j = draw_hierarchy(rng, bodies);
    if (deprit_margins(j).min() > kSampleMargin) return j;
  }
  throw Error(Errc::InvalidState, "rejection sampling did not find a nondegenerate state");
}

JacobiState sample_jacobi_state_along(Rng& rng, std::size_t bodies, const Vec3& direction) {
  if (bodies < 2) throw Error(Errc::InvalidState, "need at least two bodies");
  JacobiState j;
  if (bodies >= 3) {
    j = sample_jacobi_state(rng, bodies);
  } else {
    j.masses = sample_masses(rng, 2);
    const KeplerState s = elements_to_cartesian(sample_elements(rng, 1.0, 1.5), j.reduced_mass(1), j.grav_parameter(1));
    j.pairs.push_back({s.P, s.Q});
  }
  Vec3 C;
  for (const JacobiPair& pr : j.pairs) C += cross(pr.Q, pr.P);
  const Vec3 from = normalized(C), to = normalized(direction);
  const Vec3 axis = cross(from, to);
  const double s = norm(axis), c = dot(from, to);
  Mat3 rot;
  if (s > 1e-15) {
    rot = rotation_about(axis, std::atan2(s, c));
  } else if (c < 0.0) {
    const Vec3 any = std::abs(from.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    rot = rotation_about(cross(from, any), std::numbers::pi);
  }
  for (JacobiPair& pr : j.pairs) {
    pr.P = rot * pr.P;
    pr.Q = rot * pr.Q;
  }
  return j;
}

PhaseState sample_phase_state(Rng& rng, std::size_t bodies) {
  if (bodies >= 3) return from_jacobi(sample_jacobi_state(rng, bodies));
  return from_jacobi(sample_jacobi_state_along(rng, 2, {0.0, 0.0, 1.0}));
}

}  // namespace cmech
