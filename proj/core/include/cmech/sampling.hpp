#pragma once

#include <cstdint>
#include <vector>

#include "cmech/jacobi.hpp"
#include "cmech/kepler.hpp"

namespace cmech {

/// SplitMix64 generator. Output depends only on the seed, on every
/// platform, which keeps seeded sweeps byte-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Independent stream for item `index` of a seeded sweep.
  static Rng for_index(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double angle() { return uniform(0.0, kTwoPi); }

 private:
  std::uint64_t state_;
};

/// Every degeneracy margin of a sampled point is kept above this value.
inline constexpr double kSampleMargin = 0.2;
/// Upper end of sampled eccentricities; keeps finite-difference probes
/// away from the steep pericentre region of near-parabolic orbits.
inline constexpr double kSampleMaxEccentricity = 0.6;

/// Uniformly random rotation.
Mat3 random_rotation(Rng& rng);

std::vector<double> sample_masses(Rng& rng, std::size_t bodies);

/// Nondegenerate elliptic elements: e in [margin, kSampleMaxEccentricity],
/// sin(i) above the margin.
OrbitalElements sample_elements(Rng& rng, double a_min, double a_max);

/// Planar (i = 0) elliptic elements, e as above.
OrbitalElements sample_planar_elements(Rng& rng, double a_min, double a_max);

/// Hierarchical Jacobi state of `bodies` bodies, rejection-sampled until
/// every Deprit margin exceeds kSampleMargin.
JacobiState sample_jacobi_state(Rng& rng, std::size_t bodies);

/// Same, with the total angular momentum rotated onto `direction`.
JacobiState sample_jacobi_state_along(Rng& rng, std::size_t bodies, const Vec3& direction);

/// Cartesian state with zero total momentum and barycentre at the origin.
PhaseState sample_phase_state(Rng& rng, std::size_t bodies);

}  // namespace cmech
