#include "cmech/phasespace.hpp"

#include <string>

#include "cmech/errors.hpp"

namespace cmech {

void validate(const PhaseState& state) {
  if (state.bodies.size() < 2)
    throw Error(Errc::InvalidState, "at least two bodies are required");
  if (state.masses.size() != state.bodies.size())
    throw Error(Errc::InvalidState, "one mass per body is required");
  for (std::size_t j = 0; j < state.size(); ++j) {
    const double m = state.masses[j];
    if (!std::isfinite(m)) throw Error(Errc::NonFinite, "mass " + std::to_string(j));
    if (m <= 0.0) throw Error(Errc::InvalidState, "mass " + std::to_string(j) + " must be positive");
    if (!is_finite(state.bodies[j].q) || !is_finite(state.bodies[j].p))
      throw Error(Errc::NonFinite, "body " + std::to_string(j));
  }
  for (std::size_t j = 0; j < state.size(); ++j)
    for (std::size_t k = j + 1; k < state.size(); ++k)
      if (!(norm(state.bodies[j].q - state.bodies[k].q) > 0.0))
        throw Error(Errc::Collision,
                    "bodies " + std::to_string(j) + " and " + std::to_string(k) + " coincide");
}

Vector flatten(const PhaseState& state) {
  const auto n = static_cast<Eigen::Index>(state.size());
  Vector x(6 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Body& b = state.bodies[static_cast<std::size_t>(j)];
    x.segment<3>(3 * j) << b.p.x, b.p.y, b.p.z;
    x.segment<3>(3 * n + 3 * j) << b.q.x, b.q.y, b.q.z;
  }
  return x;
}

PhaseState unflatten(const Vector& x, std::span<const double> masses) {
  if (x.size() % 6 != 0 || static_cast<std::size_t>(x.size() / 6) != masses.size())
    throw Error(Errc::DimensionMismatch, "vector length must be 6 * number of masses");
  const Eigen::Index n = x.size() / 6;
  PhaseState s;
  s.masses.assign(masses.begin(), masses.end());
  s.bodies.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    Body& b = s.bodies[static_cast<std::size_t>(j)];
    b.p = {x[3 * j], x[3 * j + 1], x[3 * j + 2]};
    b.q = {x[3 * n + 3 * j], x[3 * n + 3 * j + 1], x[3 * n + 3 * j + 2]};
  }
  return s;
}

Matrix canonical_matrix(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  Matrix omega = Matrix::Zero(2 * k, 2 * k);
  omega.topRightCorner(k, k).setIdentity();
  omega.bottomLeftCorner(k, k) = -Matrix::Identity(k, k);
  return omega;
}

void require_finite(const Vector& x, const char* where) {
  if (!x.allFinite()) throw Error(Errc::NonFinite, where);
}

void require_finite(double x, const char* where) {
  if (!std::isfinite(x)) throw Error(Errc::NonFinite, where);
}

Vec3 total_momentum(const PhaseState& state) {
  Vec3 p;
  for (const Body& b : state.bodies) p += b.p;
  return p;
}

Vec3 total_angular_momentum(const PhaseState& state) {
  Vec3 c;
  for (const Body& b : state.bodies) c += cross(b.q, b.p);
  return c;
}

PhaseState rotated(const PhaseState& state, const Mat3& rotation) {
  PhaseState out = state;
  for (Body& b : out.bodies) {
    b.q = rotation * b.q;
    b.p = rotation * b.p;
  }
  return out;
}

}  // namespace cmech
