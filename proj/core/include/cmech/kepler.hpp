#pragma once

#include "cmech/chart.hpp"
#include "cmech/phasespace.hpp"

namespace cmech {

/// Degeneracy thresholds for Keplerian ellipses.
inline constexpr double kCircularTol = 1e-9;     // e below this: circular
inline constexpr double kHorizontalTol = 1e-9;   // sin(i) below this: horizontal
inline constexpr double kRectilinearTol = 1e-12; // |Q x P| / (mu sqrt(M a)) below this

struct OrbitFlags {
  bool circular = false;
  bool horizontal = false;
  bool rectilinear = false;

  bool any() const { return circular || horizontal || rectilinear; }
  friend bool operator==(const OrbitFlags&, const OrbitFlags&) = default;
};

/// Osculating ellipse of H = |P|^2 / (2 mu) - mu M / |Q|. The argument of
/// pericentre is 0 when `circular`, the node is 0 when `horizontal`.
struct OrbitalElements {
  double a = 1.0;
  double e = 0.0;
  double inclination = 0.0;
  double arg_pericenter = 0.0;
  double node = 0.0;
  double mean_anomaly = 0.0;
  OrbitFlags flags;
};

/// Delaunay action-angle variables (L, l, G, g, H, h).
struct DelaunayElements {
  double L = 1.0;  // circular angular momentum, mu sqrt(M a)
  double l = 0.0;  // mean anomaly
  double G = 1.0;  // angular momentum, L sqrt(1 - e^2)
  double g = 0.0;  // argument of pericentre
  double H = 1.0;  // vertical component of the angular momentum
  double h = 0.0;  // longitude of the ascending node
  OrbitFlags flags;
};

struct KeplerState {
  Vec3 Q;
  Vec3 P;
};

/// Eccentric anomaly E with E - e sin E = M (mod 2pi), E in [0, 2pi).
/// Newton from M + 0.85 e sign(sin M) with a bisection fallback.
/// Throws Error(InvalidEccentricity) unless 0 <= e < 1.
double solve_kepler(double mean_anomaly, double e);

/// Throws Error(NonElliptic) for non-negative energy and Error(Rectilinear)
/// when the angular momentum vanishes.
OrbitalElements cartesian_to_elements(const Vec3& Q, const Vec3& P, double mu, double M);

KeplerState elements_to_cartesian(const OrbitalElements& el, double mu, double M);

/// State on an ellipse of semi-major axis `a` and eccentricity `e` whose
/// pericentre direction is `peri` and whose in-plane normal direction (90
/// degrees ahead along the motion) is `ahead`. Both must be unit vectors.
KeplerState state_in_frame(double a, double e, double mean_anomaly, const Vec3& peri,
                           const Vec3& ahead, double mu, double M);

DelaunayElements elements_to_delaunay(const OrbitalElements& el, double mu, double M);

/// Throws Error(InvalidElements) if G > L or |H| > G beyond rounding.
OrbitalElements delaunay_to_elements(const DelaunayElements& d, double mu, double M);

DelaunayElements cartesian_to_delaunay(const Vec3& Q, const Vec3& P, double mu, double M);
KeplerState delaunay_to_cartesian(const DelaunayElements& d, double mu, double M);

/// K = -mu^3 M^2 / (2 L^2).
double keplerian_energy(double L, double mu, double M);
/// n = dK/dL = mu^3 M^2 / L^3.
double mean_motion(double L, double mu, double M);
double two_body_energy(const Vec3& Q, const Vec3& P, double mu, double M);

/// (P, Q) in R^6 -> (L, G, H, l, g, h).
Chart delaunay_chart(double mu, double M);

/// (Px, Py, Qx, Qy) -> (L, G, l, g) for prograde planar ellipses.
Chart planar_delaunay_chart(double mu, double M);

}  // namespace cmech
