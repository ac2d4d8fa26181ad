#pragma once

#include <vector>

#include "cmech/chart.hpp"
#include "cmech/jacobi.hpp"

namespace cmech {

inline constexpr double kVerticalTol = 1e-9;  // |z x C_hat| below this: VerticalC
inline constexpr double kCoplanarTol = 1e-9;  // |C_hat_k x S_hat_{k-1}| below this: CoplanarOrbits

/// Vertical components of two angular momenta with respect to the plane
/// orthogonal to their sum.
struct NodesResult {
  double H1;
  double H2;
};

/// H1 = (C^2 + G1^2 - G2^2) / (2C), H2 = (C^2 + G2^2 - G1^2) / (2C).
/// Throws Error(ZeroAngularMomentum) for C <= 0 and
/// Error(TriangleViolation) unless |G1 - G2| <= C <= G1 + G2.
NodesResult eliminate_nodes(double G1, double G2, double C);

struct AngularMomenta {
  std::vector<Vec3> per_ellipse;  // C_i = Q_i x P_i
  Vec3 total;
};

AngularMomenta angular_momenta(const JacobiState& j);

struct EllipseBlock {
  double L = 0.0;
  double l = 0.0;
  double G = 0.0;
  double gbar = 0.0;  // pericentre angle measured from the ellipse's node line
};

/// |S_k| and its conjugate node angle, for the partial sums
/// S_k = C_1 + ... + C_k with 2 <= k <= n - 1.
struct ChainPair {
  double S = 0.0;
  double psi = 0.0;
};

/// Deprit variables of n = N - 1 Keplerian ellipses.
///
/// Node lines: n_k is the direction of S_k x S_{k-1} (k = 2..n), the
/// ascending node of the plane of S_{k-1} on the plane orthogonal to S_k.
/// n_n is the line called nu_L for three bodies, nu_T = z x C.
///
///   gbar_1   pericentre of ellipse 1 from n_2, about C_1
///   gbar_i   pericentre of ellipse i from n_i, about C_i (i >= 2)
///   psi_k    from n_{k+1} to n_k, about S_k
///   phi1     from nu_T to n_n, about C
///   phi2     from the x axis to nu_T, about z
///   Phi1 = |C|, Phi2 = C_z
struct DepritState {
  std::vector<double> masses;
  std::vector<EllipseBlock> ellipses;  // i = 1..n at index i-1
  std::vector<ChainPair> chain;        // k = 2..n-1 at index k-2
  double Phi1 = 0.0;
  double phi1 = 0.0;
  double Phi2 = 0.0;
  double phi2 = 0.0;

  std::size_t ellipse_count() const { return ellipses.size(); }
};

/// Three-body Deprit variables; same code path as to_deprit_n.
DepritState to_deprit(const JacobiState& j);
JacobiState from_deprit(const DepritState& d);

/// Any N >= 3. Errors carry the failing level: the ellipse index for
/// per-ellipse degeneracies, k for the node n_k, n for VerticalC.
DepritState to_deprit_n(const JacobiState& j);
JacobiState from_deprit_n(const DepritState& d);

/// phi1 + phi2, also defined when C is vertical and points up (where the
/// individual angles are not).
double deprit_phi_sum(const JacobiState& j);

/// Flat ordering: (L_1..L_n, G_1..G_n, S_2..S_{n-1}, Phi1, Phi2,
///                 l_1..l_n, gbar_1..gbar_n, psi_2..psi_{n-1}, phi1, phi2).
Vector deprit_vector(const DepritState& d);
DepritState from_deprit_vector(const Vector& y, std::span<const double> masses);

/// Distances of a Jacobi state from the loci where the Deprit chart breaks
/// down. All fields are in [0, 1]; larger is safer.
struct DepritMargins {
  double eccentricity = 0.0;  // min over ellipses of min(e, 1 - e)
  double vertical = 0.0;      // |z x C_hat|
  double coplanar = 0.0;      // min over k of |C_hat_k x S_hat_{k-1}|
  double triangle = 0.0;      // min over k of the relative triangle slack

  double min() const;
};

/// Never throws on degenerate input; unusable states report zero margins.
DepritMargins deprit_margins(const JacobiState& j);

/// Reduced Jacobi (P_1..P_n, Q_1..Q_n) -> Deprit flat vector.
Chart deprit_chart(std::span<const double> masses);

}  // namespace cmech
