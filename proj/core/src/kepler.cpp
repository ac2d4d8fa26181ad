#include "cmech/kepler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <numbers>

#include "cmech/errors.hpp"
#include "osculating.hpp"

namespace cmech {

namespace {

void require_positive(double x, const char* what) {
  require_finite(x, what);
  if (!(x > 0.0)) throw Error(Errc::InvalidElements, std::string(what) + " must be positive");
}

void require_finite(const Vec3& v, const char* what) {
  if (!is_finite(v)) throw Error(Errc::NonFinite, what);
}

}  // namespace

double solve_kepler(double mean_anomaly, double e) {
  require_finite(mean_anomaly, "mean anomaly");
  require_finite(e, "eccentricity");
  if (!(e >= 0.0 && e < 1.0)) throw Error(Errc::InvalidEccentricity, "eccentricity must lie in [0, 1)");
  const double M = wrap_angle(mean_anomaly);
  if (e == 0.0) return M;

  auto f = [&](double E) { return E - e * std::sin(E) - M; };
  const double s = std::sin(M);
  double E = M + 0.85 * e * (s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0));
  for (int iter = 0; iter < 50; ++iter) {
    const double step = f(E) / (1.0 - e * std::cos(E));
    E -= step;
    if (!std::isfinite(E)) break;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(E))) {
      if (E >= 0.0 && E < kTwoPi && std::abs(f(E)) < 1e-13) return E;
      break;
    }
  }

  // f is increasing on [0, 2pi] with f(0) = -M <= 0 < f(2pi).
  double lo = 0.0, hi = kTwoPi;
  for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

OrbitalElements cartesian_to_elements(const Vec3& Q, const Vec3& P, double mu, double M) {
  require_finite(Q, "position");
  require_finite(P, "momentum");
  require_positive(mu, "reduced mass");
  require_positive(M, "gravitational parameter");
  const auto o = detail::osculating<double>(Q, P, mu, M);
  return {o.a, o.e, o.inclination, o.arg_pericenter, o.node, o.mean_anomaly, o.flags};
}

KeplerState state_in_frame(double a, double e, double mean_anomaly, const Vec3& peri,
                           const Vec3& ahead, double mu, double M) {
  const double E = solve_kepler(mean_anomaly, e);
  const double cE = std::cos(E), sE = std::sin(E);
  const double b_over_a = std::sqrt((1.0 - e) * (1.0 + e));
  const double r = a * (1.0 - e * cE);
  const double E_dot = std::sqrt(M / a) / r;  // n a / r
  const double x = a * (cE - e), y = a * b_over_a * sE;
  const double vx = -a * sE * E_dot, vy = a * b_over_a * cE * E_dot;
  return {x * peri + y * ahead, mu * (vx * peri + vy * ahead)};
}

KeplerState elements_to_cartesian(const OrbitalElements& el, double mu, double M) {
  require_positive(mu, "reduced mass");
  require_positive(M, "gravitational parameter");
  require_positive(el.a, "semi-major axis");
  for (double x : {el.e, el.inclination, el.arg_pericenter, el.node, el.mean_anomaly})
    require_finite(x, "orbital element");
  if (el.flags.rectilinear) throw Error(Errc::Rectilinear, "rectilinear elements have no Cartesian image");
  if (!(el.e >= 0.0 && el.e < 1.0)) throw Error(Errc::InvalidEccentricity, "eccentricity must lie in [0, 1)");
  if (el.inclination < 0.0 || el.inclination > std::numbers::pi)
    throw Error(Errc::InvalidElements, "inclination must lie in [0, pi]");

  const double ci = std::cos(el.inclination), si = std::sin(el.inclination);
  const double cO = std::cos(el.node), sO = std::sin(el.node);
  const double cw = std::cos(el.arg_pericenter), sw = std::sin(el.arg_pericenter);
  const Vec3 n_hat{cO, sO, 0.0};
  const Vec3 h_hat{si * sO, -si * cO, ci};
  const Vec3 m_hat = cross(h_hat, n_hat);
  const Vec3 peri = cw * n_hat + sw * m_hat;
  const Vec3 ahead = cross(h_hat, peri);
  return state_in_frame(el.a, el.e, el.mean_anomaly, peri, ahead, mu, M);
}

DelaunayElements elements_to_delaunay(const OrbitalElements& el, double mu, double M) {
  require_positive(mu, "reduced mass");
  require_positive(M, "gravitational parameter");
  require_positive(el.a, "semi-major axis");
  if (!(el.e >= 0.0 && el.e < 1.0)) throw Error(Errc::InvalidEccentricity, "eccentricity must lie in [0, 1)");
  require_finite(el.inclination, "inclination");
  DelaunayElements d;
  d.L = mu * std::sqrt(M * el.a);
  d.G = el.flags.circular ? d.L : d.L * std::sqrt((1.0 - el.e) * (1.0 + el.e));
  if (el.flags.horizontal)
    d.H = std::cos(el.inclination) >= 0.0 ? d.G : -d.G;
  else
    d.H = d.G * std::cos(el.inclination);
  d.l = wrap_angle(el.mean_anomaly);
  d.g = wrap_angle(el.arg_pericenter);
  d.h = wrap_angle(el.node);
  d.flags = el.flags;
  return d;
}

OrbitalElements delaunay_to_elements(const DelaunayElements& d, double mu, double M) {
  require_positive(mu, "reduced mass");
  require_positive(M, "gravitational parameter");
  for (double x : {d.L, d.l, d.G, d.g, d.H, d.h}) require_finite(x, "Delaunay element");
  if (!(d.L > 0.0)) throw Error(Errc::InvalidElements, "L must be positive");
  if (!(d.G > 0.0)) throw Error(Errc::InvalidElements, "G must be positive");
  constexpr double slack = 1e-12;
  if (d.G > d.L * (1.0 + slack)) throw Error(Errc::InvalidElements, "G exceeds L");
  if (std::abs(d.H) > d.G * (1.0 + slack)) throw Error(Errc::InvalidElements, "|H| exceeds G");

  OrbitalElements el;
  el.a = d.L * d.L / (mu * mu * M);
  const double ratio = std::min(d.G / d.L, 1.0);
  el.e = std::sqrt((1.0 - ratio) * (1.0 + ratio));
  const double H = std::clamp(d.H, -d.G, d.G);
  el.inclination = std::atan2(std::sqrt((d.G - H) * (d.G + H)), H);
  el.mean_anomaly = wrap_angle(d.l);
  el.arg_pericenter = wrap_angle(d.g);
  el.node = wrap_angle(d.h);
  el.flags = d.flags;
  el.flags.circular = el.flags.circular || el.e < kCircularTol;
  el.flags.horizontal = el.flags.horizontal || std::sin(el.inclination) < kHorizontalTol;
  return el;
}

DelaunayElements cartesian_to_delaunay(const Vec3& Q, const Vec3& P, double mu, double M) {
  return elements_to_delaunay(cartesian_to_elements(Q, P, mu, M), mu, M);
}

KeplerState delaunay_to_cartesian(const DelaunayElements& d, double mu, double M) {
  return elements_to_cartesian(delaunay_to_elements(d, mu, M), mu, M);
}

double keplerian_energy(double L, double mu, double M) {
  require_positive(L, "L");
  return -mu * mu * mu * M * M / (2.0 * L * L);
}

double mean_motion(double L, double mu, double M) {
  require_positive(L, "L");
  return mu * mu * mu * M * M / (L * L * L);
}

double two_body_energy(const Vec3& Q, const Vec3& P, double mu, double M) {
  return 0.5 * dot(P, P) / mu - mu * M / norm(Q);
}

namespace {

template <typename V, typename S>
V delaunay_forward(const V& x, double mu, double M) {
  const BasicVec3<S> P{x[0], x[1], x[2]}, Q{x[3], x[4], x[5]};
  const auto o = detail::osculating<S>(Q, P, mu, M);
  if (o.flags.circular) throw Error(Errc::Circular, "argument of pericentre undefined");
  if (o.flags.horizontal) throw Error(Errc::DomainViolation, "node undefined for a horizontal orbit");
  V y(6);
  detail::delaunay_actions(o, mu, M, y[0], y[1], y[2]);
  y[3] = o.mean_anomaly;
  y[4] = o.arg_pericenter;
  y[5] = o.node;
  return y;
}

template <typename V, typename S>
V planar_forward(const V& x, double mu, double M) {
  const BasicVec3<S> P{x[0], x[1], S(0.0)}, Q{x[2], x[3], S(0.0)};
  const auto o = detail::osculating<S>(Q, P, mu, M);
  if (o.flags.circular) throw Error(Errc::Circular, "argument of pericentre undefined");
  if (!(value(o.c.z) > 0.0)) throw Error(Errc::DomainViolation, "planar chart requires prograde motion");
  V y(4);
  S H;
  detail::delaunay_actions(o, mu, M, y[0], y[1], H);
  y[2] = o.mean_anomaly;
  y[3] = o.arg_pericenter;
  return y;
}

template <typename F>
bool succeeds(F&& f) {
  try {
    f();
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

Chart delaunay_chart(double mu, double M) {
  require_positive(mu, "reduced mass");
  require_positive(M, "gravitational parameter");
  Chart c;
  c.name = "delaunay";
  c.dim = 6;
  c.forward = [mu, M](const Vector& x) {
    if (x.size() != 6) throw Error(Errc::DimensionMismatch, "delaunay chart");
    require_finite(x, "delaunay chart input");
    return delaunay_forward<Vector, double>(x, mu, M);
  };
  c.inverse = [mu, M](const Vector& y) {
    if (y.size() != 6) throw Error(Errc::DimensionMismatch, "delaunay chart");
    const KeplerState s = delaunay_to_cartesian({y[0], y[3], y[1], y[4], y[2], y[5], {}}, mu, M);
    Vector x(6);
    x << s.P.x, s.P.y, s.P.z, s.Q.x, s.Q.y, s.Q.z;
    return x;
  };
  c.in_domain = [mu, M](const Vector& x) {
    return x.size() == 6 && x.allFinite() && succeeds([&] { delaunay_forward<Vector, double>(x, mu, M); });
  };
  c.pairing = standard_pairing(3);
  c.periodic = {false, false, false, true, true, true};
  c.moment_pair = 2;
  c.forward_dual = [mu, M](const DualVector& x) { return delaunay_forward<DualVector, Dual>(x, mu, M); };
  return c;
}

Chart planar_delaunay_chart(double mu, double M) {
  require_positive(mu, "reduced mass");
  require_positive(M, "gravitational parameter");
  Chart c;
  c.name = "delaunay-planar";
  c.dim = 4;
  c.forward = [mu, M](const Vector& x) {
    if (x.size() != 4) throw Error(Errc::DimensionMismatch, "planar delaunay chart");
    require_finite(x, "planar delaunay chart input");
    return planar_forward<Vector, double>(x, mu, M);
  };
  c.inverse = [mu, M](const Vector& y) {
    if (y.size() != 4) throw Error(Errc::DimensionMismatch, "planar delaunay chart");
    OrbitalElements el = delaunay_to_elements({y[0], y[2], y[1], y[3], y[1], 0.0, {}}, mu, M);
    el.inclination = 0.0;
    el.node = 0.0;
    const KeplerState s = elements_to_cartesian(el, mu, M);
    Vector x(4);
    x << s.P.x, s.P.y, s.Q.x, s.Q.y;
    return x;
  };
  c.in_domain = [mu, M](const Vector& x) {
    return x.size() == 4 && x.allFinite() && succeeds([&] { planar_forward<Vector, double>(x, mu, M); });
  };
  c.pairing = standard_pairing(2);
  c.periodic = {false, false, true, true};
  c.forward_dual = [mu, M](const DualVector& x) { return planar_forward<DualVector, Dual>(x, mu, M); };
  return c;
}

}  // namespace cmech
