#include "cmech/deprit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmech/errors.hpp"
#include "cmech/kepler.hpp"
#include "osculating.hpp"

namespace cmech {

NodesResult eliminate_nodes(double G1, double G2, double C) {
  require_finite(G1, "G1");
  require_finite(G2, "G2");
  require_finite(C, "C");
  if (!(G1 > 0.0) || !(G2 > 0.0)) throw Error(Errc::InvalidElements, "G1 and G2 must be positive");
  if (!(C > 0.0)) throw Error(Errc::ZeroAngularMomentum, "total angular momentum must be nonzero");
  const double slack = 1e-12 * (G1 + G2);
  if (C < std::abs(G1 - G2) - slack || C > G1 + G2 + slack)
    throw Error(Errc::TriangleViolation, "requires |G1 - G2| <= C <= G1 + G2");
  // H = C/2 +- d
  const double d = (G1 - G2) * (G1 + G2) / (2.0 * C);
  return {0.5 * C + d, 0.5 * C - d};
}

AngularMomenta angular_momenta(const JacobiState& j) {
  AngularMomenta out;
  out.per_ellipse.reserve(j.pairs.size());
  for (const JacobiPair& pr : j.pairs) {
    out.per_ellipse.push_back(cross(pr.Q, pr.P));
    out.total += out.per_ellipse.back();
  }
  return out;
}

double DepritMargins::min() const {
  return std::min({eccentricity, vertical, coplanar, triangle});
}

namespace detail {
namespace {

// Angle from `from` to `to` about `normal`; both vectors orthogonal to it.
template <typename T>
T angle_about(const BasicVec3<T>& from, const BasicVec3<T>& to, const BasicVec3<T>& normal) {
  using std::atan2;
  return wrap_angle(atan2(dot(normal, cross(from, to)) / norm(normal), dot(from, to)));
}

template <typename T>
std::vector<T> deprit_forward(const std::vector<BasicVec3<T>>& P, const std::vector<BasicVec3<T>>& Q,
                              const std::vector<double>& mu, const std::vector<double>& M) {
  const std::size_t n = P.size();
  if (n < 2) throw Error(Errc::InvalidState, "Deprit variables need at least two ellipses");

  std::vector<Osculating<T>> osc;
  osc.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int level = static_cast<int>(i + 1);
    try {
      osc.push_back(osculating<T>(Q[i], P[i], mu[i], M[i]));
    } catch (const Error& e) {
      throw Error(e.code(), "ellipse " + std::to_string(level), level);
    }
    if (osc.back().flags.circular)
      throw Error(Errc::Circular, "ellipse " + std::to_string(level) + " is circular", level);
  }

  // S[k] = C_1 + ... + C_{k+1}
  std::vector<BasicVec3<T>> S(n);
  S[0] = osc[0].c;
  for (std::size_t k = 1; k < n; ++k) S[k] = S[k - 1] + osc[k].c;
  for (std::size_t k = 1; k < n; ++k)
    if (!(value(norm(S[k])) > 0.0))
      throw Error(Errc::ZeroAngularMomentum, "partial angular momentum vanishes", static_cast<int>(k + 1));

  const BasicVec3<T>& C = S[n - 1];
  const T C_norm = norm(C);
  const BasicVec3<T> nu_T{-C.y, C.x, T(0.0)};
  if (value(norm(nu_T)) < kVerticalTol * value(C_norm))
    throw Error(Errc::VerticalC, "total angular momentum is vertical", static_cast<int>(n));

  // node[k] is n_{k+1}, k = 1..n-1
  std::vector<BasicVec3<T>> node(n);
  for (std::size_t k = 1; k < n; ++k) {
    const BasicVec3<T> c_k = osc[k].c;
    const double sin_angle =
        value(norm(cross(c_k, S[k - 1]))) / (value(norm(c_k)) * value(norm(S[k - 1])));
    if (sin_angle < kCoplanarTol)
      throw Error(Errc::CoplanarOrbits, "orbital planes coincide", static_cast<int>(k + 1));
    node[k] = cross(S[k], S[k - 1]);
  }

  const std::size_t chain = n - 2;
  std::vector<T> y(6 * n);
  const std::size_t half = 3 * n;
  using std::sqrt;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = T(mu[i]) * sqrt(T(M[i]) * osc[i].a);                        // L_i
    y[n + i] = norm(osc[i].c);                                         // G_i
    y[half + i] = osc[i].mean_anomaly;                                 // l_i
    const BasicVec3<T>& ref = node[i == 0 ? 1 : i];
    y[half + n + i] = angle_about(ref, osc[i].ecc, osc[i].c);          // gbar_i
  }
  for (std::size_t c = 0; c < chain; ++c) {
    const std::size_t k = c + 1;  // S[k] is S_{k+1}, between node[k+1] and node[k]
    y[2 * n + c] = norm(S[k]);
    y[half + 2 * n + c] = angle_about(node[k + 1], node[k], S[k]);
  }
  using std::atan2;
  y[2 * n + chain] = C_norm;                                           // Phi1
  y[2 * n + chain + 1] = C.z;                                          // Phi2
  y[half + 2 * n + chain] = angle_about(nu_T, node[n - 1], C);         // phi1
  y[half + 2 * n + chain + 1] = wrap_angle(atan2(nu_T.y, nu_T.x));     // phi2
  return y;
}

}  // namespace
}  // namespace detail

namespace {

std::pair<std::vector<double>, std::vector<double>> kepler_parameters(std::span<const double> masses) {
  JacobiState probe;
  probe.masses.assign(masses.begin(), masses.end());
  std::vector<double> mu, M;
  for (std::size_t i = 1; i < masses.size(); ++i) {
    mu.push_back(probe.reduced_mass(i));
    M.push_back(probe.grav_parameter(i));
  }
  return {mu, M};
}

std::vector<double> forward_values(const JacobiState& j) {
  const auto [mu, M] = kepler_parameters(j.masses);
  std::vector<Vec3> P, Q;
  for (const JacobiPair& pr : j.pairs) {
    P.push_back(pr.P);
    Q.push_back(pr.Q);
  }
  return detail::deprit_forward<double>(P, Q, mu, M);
}

void check_masses(std::span<const double> masses) {
  if (masses.size() < 3) throw Error(Errc::InvalidState, "Deprit variables need N >= 3 bodies");
  for (double m : masses) {
    require_finite(m, "mass");
    if (!(m > 0.0)) throw Error(Errc::InvalidState, "masses must be positive");
  }
}

}  // namespace

Vector deprit_vector(const DepritState& d) {
  const std::size_t n = d.ellipses.size();
  if (n < 2 || d.chain.size() + 2 != n)
    throw Error(Errc::InvalidState, "Deprit state needs n >= 2 ellipses and n - 2 chain pairs");
  const std::size_t half = 3 * n, chain = n - 2;
  Vector y(static_cast<Eigen::Index>(6 * n));
  auto at = [&y](std::size_t k) -> double& { return y[static_cast<Eigen::Index>(k)]; };
  for (std::size_t i = 0; i < n; ++i) {
    at(i) = d.ellipses[i].L;
    at(n + i) = d.ellipses[i].G;
    at(half + i) = d.ellipses[i].l;
    at(half + n + i) = d.ellipses[i].gbar;
  }
  for (std::size_t c = 0; c < chain; ++c) {
    at(2 * n + c) = d.chain[c].S;
    at(half + 2 * n + c) = d.chain[c].psi;
  }
  at(2 * n + chain) = d.Phi1;
  at(2 * n + chain + 1) = d.Phi2;
  at(half + 2 * n + chain) = d.phi1;
  at(half + 2 * n + chain + 1) = d.phi2;
  return y;
}

DepritState from_deprit_vector(const Vector& y, std::span<const double> masses) {
  if (masses.size() < 3 || y.size() != 6 * static_cast<Eigen::Index>(masses.size() - 1))
    throw Error(Errc::DimensionMismatch, "Deprit vector must have length 6 (N - 1)");
  const std::size_t n = masses.size() - 1, half = 3 * n, chain = n - 2;
  auto at = [&y](std::size_t k) { return y[static_cast<Eigen::Index>(k)]; };
  DepritState d;
  d.masses.assign(masses.begin(), masses.end());
  d.ellipses.resize(n);
  d.chain.resize(chain);
  for (std::size_t i = 0; i < n; ++i)
    d.ellipses[i] = {at(i), wrap_angle(at(half + i)), at(n + i), wrap_angle(at(half + n + i))};
  for (std::size_t c = 0; c < chain; ++c) d.chain[c] = {at(2 * n + c), wrap_angle(at(half + 2 * n + c))};
  d.Phi1 = at(2 * n + chain);
  d.Phi2 = at(2 * n + chain + 1);
  d.phi1 = wrap_angle(at(half + 2 * n + chain));
  d.phi2 = wrap_angle(at(half + 2 * n + chain + 1));
  return d;
}

DepritState to_deprit_n(const JacobiState& j) {
  check_masses(j.masses);
  validate(j);
  const std::vector<double> y = forward_values(j);
  return from_deprit_vector(Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size())),
                            j.masses);
}

DepritState to_deprit(const JacobiState& j) {
  if (j.masses.size() != 3) throw Error(Errc::InvalidState, "to_deprit is the three-body map; use to_deprit_n");
  return to_deprit_n(j);
}

JacobiState from_deprit_n(const DepritState& d) {
  check_masses(d.masses);
  const std::size_t n = d.ellipses.size();
  if (n + 1 != d.masses.size() || d.chain.size() + 2 != n)
    throw Error(Errc::InvalidState, "Deprit state sizes do not match the masses");
  require_finite(deprit_vector(d), "Deprit state");
  for (std::size_t i = 0; i < n; ++i) {
    const EllipseBlock& e = d.ellipses[i];
    const int level = static_cast<int>(i + 1);
    if (!(e.L > 0.0) || !(e.G > 0.0) || e.G > e.L * (1.0 + 1e-12))
      throw Error(Errc::InvalidElements, "requires 0 < G <= L", level);
    if (e.G >= e.L * (1.0 - 0.5 * kCircularTol * kCircularTol))
      throw Error(Errc::Circular, "ellipse " + std::to_string(level) + " is circular", level);
  }
  for (const ChainPair& c : d.chain)
    if (!(c.S > 0.0)) throw Error(Errc::ZeroAngularMomentum, "partial angular momentum must be positive");
  if (!(d.Phi1 > 0.0)) throw Error(Errc::ZeroAngularMomentum, "Phi1 must be positive", static_cast<int>(n));
  if (std::abs(d.Phi2) > d.Phi1) throw Error(Errc::InvalidElements, "|Phi2| exceeds Phi1", static_cast<int>(n));

  const double cos_I = d.Phi2 / d.Phi1;
  const double sin_I = std::sqrt((1.0 - cos_I) * (1.0 + cos_I));
  if (sin_I < kVerticalTol) throw Error(Errc::VerticalC, "total angular momentum is vertical", static_cast<int>(n));
  const double c2 = std::cos(d.phi2), s2 = std::sin(d.phi2);
  const Vec3 C_hat{sin_I * s2, -sin_I * c2, cos_I};
  const Vec3 nu_T{c2, s2, 0.0};

  auto rotate_in_plane = [](const Vec3& from, const Vec3& axis_hat, double angle) {
    return std::cos(angle) * from + std::sin(angle) * cross(axis_hat, from);
  };

  // S[k] = S_{k+1}, node[k] = n_{k+1}
  std::vector<double> S_norm(n);
  S_norm[0] = d.ellipses[0].G;
  for (std::size_t c = 0; c < d.chain.size(); ++c) S_norm[c + 1] = d.chain[c].S;
  S_norm[n - 1] = d.Phi1;

  std::vector<Vec3> S(n), node(n), C(n);
  S[n - 1] = d.Phi1 * C_hat;
  node[n - 1] = rotate_in_plane(nu_T, C_hat, d.phi1);
  for (std::size_t k = n - 1; k >= 1; --k) {
    const Vec3 S_hat = S[k] / S_norm[k];
    NodesResult h;
    try {
      h = eliminate_nodes(S_norm[k - 1], d.ellipses[k].G, S_norm[k]);
    } catch (const Error& e) {
      throw Error(e.code(), "angular momenta do not close", static_cast<int>(k + 1));
    }
    const double inner = S_norm[k - 1];
    const double H_in = std::clamp(h.H1, -inner, inner);
    const Vec3 w = cross(node[k], S_hat);
    S[k - 1] = H_in * S_hat + std::sqrt((inner - H_in) * (inner + H_in)) * w;
    C[k] = S[k] - S[k - 1];
    if (norm(cross(C[k], S[k - 1])) < kCoplanarTol * d.ellipses[k].G * inner)
      throw Error(Errc::CoplanarOrbits, "orbital planes coincide", static_cast<int>(k + 1));
    if (k >= 2) {
      const Vec3 axis = S[k - 1] / S_norm[k - 1];
      node[k - 1] = normalized(rotate_in_plane(node[k], axis, d.chain[k - 2].psi));
    }
  }
  C[0] = S[0];

  const auto [mu, M] = kepler_parameters(d.masses);
  JacobiState j;
  j.masses = d.masses;
  j.pairs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const EllipseBlock& e = d.ellipses[i];
    const Vec3 C_hat_i = normalized(C[i]);
    const Vec3 ref = normalized(node[i == 0 ? 1 : i]);
    const Vec3 peri = rotate_in_plane(ref, C_hat_i, e.gbar);
    const Vec3 ahead = cross(C_hat_i, peri);
    const double a = e.L * e.L / (mu[i] * mu[i] * M[i]);
    const double ratio = std::min(e.G / e.L, 1.0);
    const double ecc = std::sqrt((1.0 - ratio) * (1.0 + ratio));
    const KeplerState s = state_in_frame(a, ecc, e.l, peri, ahead, mu[i], M[i]);
    j.pairs[i] = {s.P, s.Q};
  }
  return j;
}

JacobiState from_deprit(const DepritState& d) {
  if (d.masses.size() != 3) throw Error(Errc::InvalidState, "from_deprit is the three-body map; use from_deprit_n");
  return from_deprit_n(d);
}

double deprit_phi_sum(const JacobiState& j) {
  check_masses(j.masses);
  const AngularMomenta am = angular_momenta(j);
  const Vec3& C = am.total;
  if (!(norm(C) > 0.0)) throw Error(Errc::ZeroAngularMomentum, "total angular momentum vanishes");
  const Vec3 z{0.0, 0.0, 1.0};
  if (norm(cross(z, C)) >= kVerticalTol * norm(C)) {
    const DepritState d = to_deprit_n(j);
    return wrap_angle(d.phi1 + d.phi2);
  }
  if (C.z < 0.0)
    throw Error(Errc::VerticalC, "phi1 + phi2 has no limit for C pointing down", static_cast<int>(j.ellipses()));
  // With C vertical, nu_T drops out and phi1 + phi2 is the longitude of n_n.
  const std::size_t n = j.ellipses();
  Vec3 S_prev = am.per_ellipse[0];
  for (std::size_t k = 1; k + 1 < n; ++k) S_prev += am.per_ellipse[k];
  const Vec3 node = cross(C, S_prev);
  if (norm(node) < kCoplanarTol * norm(C) * norm(S_prev))
    throw Error(Errc::CoplanarOrbits, "orbital planes coincide", static_cast<int>(n));
  return wrap_angle(std::atan2(node.y, node.x));
}

DepritMargins deprit_margins(const JacobiState& j) {
  DepritMargins m;
  try {
    const auto [mu, M] = kepler_parameters(j.masses);
    const std::size_t n = j.pairs.size();
    double ecc = 1.0;
    std::vector<Vec3> c(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto o = detail::osculating<double>(j.pairs[i].Q, j.pairs[i].P, mu[i], M[i]);
      ecc = std::min({ecc, o.e, 1.0 - o.e});
      c[i] = o.c;
    }
    double coplanar = 1.0, triangle = 1.0;
    Vec3 S = c[0];
    for (std::size_t k = 1; k < n; ++k) {
      const double a = norm(S), b = norm(c[k]);
      coplanar = std::min(coplanar, norm(cross(c[k], S)) / (a * b));
      const Vec3 next = S + c[k];
      const double s = norm(next);
      triangle = std::min(triangle, std::min(s - std::abs(a - b), a + b - s) / (a + b));
      S = next;
    }
    m.eccentricity = std::max(ecc, 0.0);
    m.vertical = norm(S) > 0.0 ? std::hypot(S.x, S.y) / norm(S) : 0.0;
    m.coplanar = coplanar;
    m.triangle = std::max(triangle, 0.0);
  } catch (const Error&) {
    return {};
  }
  return m;
}

Chart deprit_chart(std::span<const double> masses) {
  check_masses(masses);
  std::vector<double> m(masses.begin(), masses.end());
  const std::size_t n = m.size() - 1;
  const auto [mu, M] = kepler_parameters(m);

  auto split = [n](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    std::vector<BasicVec3<S>> P(n), Q(n);
    for (std::size_t i = 0; i < n; ++i) {
      P[i] = {x[3 * i], x[3 * i + 1], x[3 * i + 2]};
      Q[i] = {x[3 * n + 3 * i], x[3 * n + 3 * i + 1], x[3 * n + 3 * i + 2]};
    }
    return std::pair{P, Q};
  };

  Chart c;
  c.name = "deprit" + std::to_string(m.size());
  c.dim = 6 * n;
  c.forward = [=](const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != 6 * n) throw Error(Errc::DimensionMismatch, "deprit chart");
    require_finite(x, "deprit chart input");
    const auto [P, Q] = split(x);
    const std::vector<double> y = detail::deprit_forward<double>(P, Q, mu, M);
    return Vector(Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size())));
  };
  c.inverse = [m](const Vector& y) { return reduced_vector(from_deprit_n(from_deprit_vector(y, m))); };
  c.in_domain = [=](const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != 6 * n || !x.allFinite()) return false;
    try {
      const auto [P, Q] = split(x);
      detail::deprit_forward<double>(P, Q, mu, M);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  c.pairing = standard_pairing(3 * n);
  c.periodic.assign(6 * n, false);
  std::fill(c.periodic.begin() + static_cast<std::ptrdiff_t>(3 * n), c.periodic.end(), true);
  c.moment_pair = 3 * n - 1;
  c.forward_dual = [=](const DualVector& x) {
    const auto [P, Q] = split(x);
    return detail::deprit_forward<Dual>(P, Q, mu, M);
  };
  return c;
}

}  // namespace cmech
