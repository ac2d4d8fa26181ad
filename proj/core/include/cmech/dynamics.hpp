#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cmech/kepler.hpp"
#include "cmech/phasespace.hpp"

namespace cmech {

/// F = 1/2 sum |p_j|^2 / m_j - sum_{j<k} m_j m_k / |q_j - q_k|, any N >= 2.
/// Throws Error(Collision) on coincident bodies.
double hamiltonian(const PhaseState& state);

/// Gravitational accelerations times mass, i.e. -dF/dq_j.
std::vector<Vec3> forces(const PhaseState& state);

/// Samples of an integration run; every monitor array has one entry per
/// sample.
struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<double> energy;
  std::vector<Vec3> angular_momentum;
  std::vector<Vec3> direction;  // C / |C|, zero when C vanishes
  /// Set when the run stopped early because two bodies came closer than
  /// kCollisionFraction times the initial minimum distance.
  bool collided = false;
  std::size_t steps_done = 0;

  std::size_t size() const { return times.size(); }
};

inline constexpr double kCollisionFraction = 1e-8;

/// Fixed-step kick-drift-kick leapfrog. Records the initial state and then
/// every `stride`-th step (and always the last completed step).
Trajectory integrate(const PhaseState& state, double dt, std::size_t steps, std::size_t stride = 1);

/// `t q0x q0y q0z ... q(N-1)z p0x ... p(N-1)z F Cx Cy Cz`, one line per
/// sample, %.17g.
std::string export_trajectory(const Trajectory& trajectory);

/// Kepler flow: l advances by n t, everything else is fixed.
DelaunayElements propagate_kepler(const DelaunayElements& d, double mu, double M, double t);

/// Angle between two nonzero vectors, accurate for small angles.
double angle_between(const Vec3& a, const Vec3& b);

struct DepritDrift {
  double Phi1 = 0.0;  // max |Phi1(t) - Phi1(0)|
  double Phi2 = 0.0;
  double phi2 = 0.0;  // wrapped difference
  double l = 0.0;     // max over ellipses and samples of |l_i(t) - l_i(0)| (wrapped)
  double gbar = 0.0;
  double phi1 = 0.0;
};

struct InvarianceReport {
  std::size_t samples = 0;
  double max_angle = 0.0;          // max angle between C(t) and direction
  double max_c_norm_drift = 0.0;   // relative
  double max_energy_drift = 0.0;   // relative
  bool collided = false;
  /// Present for N >= 3 when every sample lies in the Deprit domain.
  std::optional<DepritDrift> deprit;
  std::string deprit_error;        // why `deprit` is missing, if it is
};

inline constexpr double kInvarianceTol = 1e-10;
/// Input C must be within this angle of `direction`.
inline constexpr double kAlignmentTol = 1e-9;

/// Integrate and monitor the fixed-direction submanifold. Throws
/// Error(ZeroAngularMomentum) when C = 0 and Error(InvalidState) when C is
/// not along `direction`.
InvarianceReport invariance_demo(const PhaseState& state, const Vec3& direction, double dt, std::size_t steps);

}  // namespace cmech
