#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cmech/chart.hpp"
#include "cmech/phasespace.hpp"

namespace cmech {

/// Momentum/position of one fictitious particle.
struct JacobiPair {
  Vec3 P;
  Vec3 Q;

  friend bool operator==(const JacobiPair&, const JacobiPair&) = default;
};

/// The pair removed by the translation reduction: P0 is the total momentum
/// and Q0 the position of body 0.
struct JacobiAnchor {
  Vec3 P0;
  Vec3 Q0;

  friend bool operator==(const JacobiAnchor&, const JacobiAnchor&) = default;
};

/// Hierarchical Jacobi coordinates: Q_i is body i relative to the
/// barycentre of bodies 0..i-1, and P_i = p_i + (m_i / eta_i) sum_{j>i} p_j
/// with eta_i = m_0 + ... + m_i. For three bodies these are exactly
/// P1 = p1 + s1 p2, P2 = p2, Q1 = q1 - q0, Q2 = q2 - s0 q0 - s1 q1.
struct JacobiState {
  std::vector<double> masses;     // m_0 .. m_{N-1}
  std::vector<JacobiPair> pairs;  // i = 1 .. N-1, stored at index i-1

  std::size_t bodies() const { return masses.size(); }
  std::size_t ellipses() const { return pairs.size(); }

  /// mu_i = m_i eta_{i-1} / eta_i, i in 1..N-1.
  double reduced_mass(std::size_t i) const;
  /// M_i = eta_i, so that mu_i M_i = m_i eta_{i-1}.
  double grav_parameter(std::size_t i) const;

  const JacobiPair& pair(std::size_t i) const { return pairs.at(i - 1); }

  friend bool operator==(const JacobiState&, const JacobiState&) = default;
};

struct JacobiSplit {
  JacobiState state;
  JacobiAnchor anchor;
};

/// Throws Error(InvalidState / NonFinite / Collision).
void validate(const JacobiState& j);

JacobiSplit to_jacobi(const PhaseState& state);

/// Without an anchor the result has zero total momentum and its barycentre
/// at the origin.
PhaseState from_jacobi(const JacobiState& j, const std::optional<JacobiAnchor>& anchor = std::nullopt);

/// Kinetic plus potential energy of the bodies reconstructed with P0 = 0.
double reduced_hamiltonian(const JacobiState& j);

/// Closed-form three-body energy in Jacobi variables; equal to
/// reduced_hamiltonian up to rounding.
double reduced_hamiltonian_closed_form(const JacobiState& j);

/// (P_1 .. P_n, Q_1 .. Q_n), length 6n with n = N - 1.
Vector reduced_vector(const JacobiState& j);
JacobiState from_reduced_vector(const Vector& x, std::span<const double> masses);

/// Position of the barycentre of bodies 0..N-1.
Vec3 barycenter(const PhaseState& state);

/// Cartesian (p_0..p_{N-1}, q_0..q_{N-1}) -> (P_0..P_{N-1}, Q_0..Q_{N-1}).
Chart jacobi_chart(std::span<const double> masses);

}  // namespace cmech
