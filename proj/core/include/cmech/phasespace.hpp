#pragma once

// Conventions shared by every coordinate system in the library.
//
//   * Flat coordinate vectors list all momenta (or actions) first, then all
//     positions (or angles), in matching order.
//   * Poisson bracket: {f,g} = sum_i (df/dP_i dg/dQ_i - df/dQ_i dg/dP_i).
//   * Canonical matrix in that ordering: Omega = [[0, I], [-I, 0]], so that
//     {f,g} = grad(f)^T Omega grad(g) and {P_i, Q_i} = +1.
//   * Equations of motion: dQ/dt = dH/dP, dP/dt = -dH/dQ.
//   * Gravitational constant G = 1.
//   * Angles are returned in [0, 2pi); any real input angle is accepted.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cmech/dual.hpp"
#include "cmech/vec3.hpp"

namespace cmech {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Body {
  Vec3 q;
  Vec3 p;

  friend bool operator==(const Body&, const Body&) = default;
};

/// Positions, momenta and masses of N bodies in an inertial frame.
struct PhaseState {
  std::vector<Body> bodies;
  std::vector<double> masses;

  std::size_t size() const { return bodies.size(); }
  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Throws Error(NonFinite) on NaN/Inf, Error(InvalidState) on N < 2,
/// mismatched sizes or non-positive masses, Error(Collision) on coincident
/// bodies.
void validate(const PhaseState& state);

/// Flat vector (p_0, ..., p_{N-1}, q_0, ..., q_{N-1}) of length 6N.
Vector flatten(const PhaseState& state);
PhaseState unflatten(const Vector& x, std::span<const double> masses);

/// Canonical matrix for `n` degrees of freedom; entries are exactly 0 or +-1.
Matrix canonical_matrix(std::size_t n);

/// Map any real angle into [0, 2pi).
inline double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

inline Dual wrap_angle(const Dual& a) {
  return a - Dual(a.val() - wrap_angle(a.val()));
}

/// Signed difference a - b reduced to (-pi, pi].
inline double angle_difference(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  if (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

void require_finite(const Vector& x, const char* where);
void require_finite(double x, const char* where);

/// Total linear momentum and angular momentum sum(q_j x p_j).
Vec3 total_momentum(const PhaseState& state);
Vec3 total_angular_momentum(const PhaseState& state);

/// Apply the same rotation to every position and momentum.
PhaseState rotated(const PhaseState& state, const Mat3& rotation);

}  // namespace cmech
