#pragma once

// Closed-form Cartesian -> osculating-element map, templated on the scalar
// type (double or Dual).

#include <cmath>

#include "cmech/dual.hpp"
#include "cmech/errors.hpp"
#include "cmech/kepler.hpp"
#include "cmech/phasespace.hpp"
#include "cmech/vec3.hpp"

namespace cmech::detail {

template <typename T>
struct Osculating {
  T a, e, inclination, arg_pericenter, node, mean_anomaly;
  BasicVec3<T> c;    // Q x P
  BasicVec3<T> ecc;  // eccentricity vector
  OrbitFlags flags;
};

template <typename T>
Osculating<T> osculating(const BasicVec3<T>& Q, const BasicVec3<T>& P, double mu, double M) {
  using std::atan2;
  using std::cos;
  using std::sin;
  using std::sqrt;
  Osculating<T> out;
  const T r = norm(Q);
  if (!(value(r) > 0.0)) throw Error(Errc::Collision, "zero separation in two-body state");
  const BasicVec3<T> v = P / T(mu);
  const T energy = T(0.5) * dot(v, v) - T(M) / r;
  if (!(value(energy) < 0.0)) throw Error(Errc::NonElliptic, "two-body energy is not negative");
  out.a = -T(M) / (T(2.0) * energy);
  out.c = cross(Q, P);
  const T cn = norm(out.c);
  if (value(cn) < kRectilinearTol * mu * std::sqrt(M * value(out.a)))
    throw Error(Errc::Rectilinear, "angular momentum vanishes");
  const BasicVec3<T> h = out.c / T(mu);
  const T hn = cn / T(mu);
  out.ecc = cross(v, h) / T(M) - Q / r;
  out.e = norm(out.ecc);

  const T hxy = sqrt(h.x * h.x + h.y * h.y);
  out.inclination = atan2(hxy, h.z);
  out.flags.horizontal = value(hxy) < kHorizontalTol * value(hn);
  BasicVec3<T> n_hat;
  if (out.flags.horizontal) {
    out.node = T(0.0);
    n_hat = {T(1.0), T(0.0), T(0.0)};
  } else {
    out.node = wrap_angle(atan2(h.x, -h.y));
    n_hat = BasicVec3<T>{-h.y, h.x, T(0.0)} / hxy;
  }
  const BasicVec3<T> m_hat = cross(h / hn, n_hat);

  out.flags.circular = value(out.e) < kCircularTol;
  if (!out.flags.circular) {
    out.arg_pericenter = wrap_angle(atan2(dot(out.ecc, m_hat), dot(out.ecc, n_hat)));
    const T e_sin_E = dot(Q, v) / sqrt(T(M) * out.a);
    const T e_cos_E = T(1.0) - r / out.a;
    out.mean_anomaly = wrap_angle(atan2(e_sin_E, e_cos_E) - e_sin_E);
  } else {
    // Pericentre placed on the node; the true anomaly is the argument of
    // latitude.
    out.arg_pericenter = T(0.0);
    const T u = atan2(dot(Q, m_hat), dot(Q, n_hat));
    const T E = atan2(sqrt(T(1.0) - out.e * out.e) * sin(u), out.e + cos(u));
    out.mean_anomaly = wrap_angle(E - out.e * sin(E));
  }
  return out;
}

/// L, G, H from the osculating elements, with G = L and |H| = G forced
/// on the degenerate loci.
template <typename T>
void delaunay_actions(const Osculating<T>& o, double mu, double M, T& L, T& G, T& H) {
  using std::cos;
  using std::sqrt;
  L = T(mu) * sqrt(T(M) * o.a);
  G = o.flags.circular ? L : L * sqrt((T(1.0) - o.e) * (T(1.0) + o.e));
  if (o.flags.horizontal)
    H = value(o.c.z) >= 0.0 ? G : -G;
  else
    H = G * cos(o.inclination);
}

}  // namespace cmech::detail
