#include "cmech/jacobi.hpp"

#include <string>

#include "cmech/errors.hpp"

namespace cmech {

namespace {

// eta_i = m_0 + ... + m_i
std::vector<double> cumulative_masses(std::span<const double> m) {
  std::vector<double> eta(m.size());
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) eta[i] = (s += m[i]);
  return eta;
}

// Linear maps shared by the state API and the chart; `p`/`q` index bodies,
// `P`/`Q` index Jacobi pairs 0..N-1 (0 is the anchor).
template <typename V3>
void forward_linear(std::span<const double> m, std::span<const V3> p, std::span<const V3> q,
                    std::span<V3> P, std::span<V3> Q) {
  const std::size_t n = m.size();
  const auto eta = cumulative_masses(m);
  V3 weighted = m[0] * q[0];  // sum_{j<i} m_j q_j
  Q[0] = q[0];
  for (std::size_t i = 1; i < n; ++i) {
    Q[i] = q[i] - weighted / eta[i - 1];
    weighted += m[i] * q[i];
  }
  V3 tail = p[n - 1] * 0.0;  // sum_{j>i} p_j
  for (std::size_t i = n; i-- > 1;) {
    P[i] = p[i] + (m[i] / eta[i]) * tail;
    tail += p[i];
  }
  P[0] = tail + p[0];
}

template <typename V3>
void inverse_linear(std::span<const double> m, std::span<const V3> P, std::span<const V3> Q,
                    std::span<V3> p, std::span<V3> q) {
  const std::size_t n = m.size();
  const auto eta = cumulative_masses(m);
  // barycentre of bodies 0..i-1 is B_i = Q_0 + sum_{k=1}^{i-1} (m_k / eta_k) Q_k
  V3 bary = Q[0];
  q[0] = Q[0];
  for (std::size_t i = 1; i < n; ++i) {
    q[i] = Q[i] + bary;
    bary += (m[i] / eta[i]) * Q[i];
  }
  // p_i = P_i - (m_i / eta_i) sum_{j>i} p_j, solved from the last body down;
  // p_0 = P_0 - sum_{j>0} p_j.
  V3 tail = P[0] * 0.0;
  for (std::size_t i = n; i-- > 1;) {
    p[i] = P[i] - (m[i] / eta[i]) * tail;
    tail += p[i];
  }
  p[0] = P[0] - tail;
}

}  // namespace

double JacobiState::reduced_mass(std::size_t i) const {
  if (i == 0 || i >= masses.size()) throw Error(Errc::InvalidState, "Jacobi index out of range");
  double eta_prev = 0.0;
  for (std::size_t k = 0; k < i; ++k) eta_prev += masses[k];
  return masses[i] * eta_prev / (eta_prev + masses[i]);
}

double JacobiState::grav_parameter(std::size_t i) const {
  if (i == 0 || i >= masses.size()) throw Error(Errc::InvalidState, "Jacobi index out of range");
  double eta = 0.0;
  for (std::size_t k = 0; k <= i; ++k) eta += masses[k];
  return eta;
}

void validate(const JacobiState& j) {
  if (j.masses.size() < 2 || j.pairs.size() + 1 != j.masses.size())
    throw Error(Errc::InvalidState, "Jacobi state needs N >= 2 masses and N - 1 pairs");
  for (std::size_t k = 0; k < j.masses.size(); ++k) {
    require_finite(j.masses[k], "Jacobi mass");
    if (j.masses[k] <= 0.0) throw Error(Errc::InvalidState, "mass " + std::to_string(k) + " must be positive");
  }
  for (const JacobiPair& pr : j.pairs)
    if (!is_finite(pr.P) || !is_finite(pr.Q)) throw Error(Errc::NonFinite, "Jacobi pair");
  validate(from_jacobi(j));
}

JacobiSplit to_jacobi(const PhaseState& state) {
  validate(state);
  const std::size_t n = state.size();
  std::vector<Vec3> p(n), q(n), P(n), Q(n);
  for (std::size_t j = 0; j < n; ++j) {
    p[j] = state.bodies[j].p;
    q[j] = state.bodies[j].q;
  }
  forward_linear<Vec3>(state.masses, p, q, P, Q);
  JacobiSplit out;
  out.state.masses = state.masses;
  out.state.pairs.resize(n - 1);
  for (std::size_t i = 1; i < n; ++i) out.state.pairs[i - 1] = {P[i], Q[i]};
  out.anchor = {P[0], Q[0]};
  return out;
}

PhaseState from_jacobi(const JacobiState& j, const std::optional<JacobiAnchor>& anchor) {
  const std::size_t n = j.masses.size();
  if (n < 2 || j.pairs.size() + 1 != n)
    throw Error(Errc::InvalidState, "Jacobi state needs N >= 2 masses and N - 1 pairs");
  std::vector<Vec3> P(n), Q(n), p(n), q(n);
  for (std::size_t i = 1; i < n; ++i) {
    P[i] = j.pairs[i - 1].P;
    Q[i] = j.pairs[i - 1].Q;
  }
  if (anchor) {
    P[0] = anchor->P0;
    Q[0] = anchor->Q0;
  } else {
    // Q0 = -sum_k (m_k / eta_k) Q_k puts the barycentre at the origin.
    const auto eta = cumulative_masses(j.masses);
    Vec3 shift;
    for (std::size_t i = 1; i < n; ++i) shift += (j.masses[i] / eta[i]) * Q[i];
    Q[0] = -shift;
  }
  inverse_linear<Vec3>(j.masses, P, Q, p, q);
  PhaseState s;
  s.masses = j.masses;
  s.bodies.resize(n);
  for (std::size_t k = 0; k < n; ++k) s.bodies[k] = {q[k], p[k]};
  return s;
}

namespace {

double cartesian_energy(const PhaseState& s) {
  double kinetic = 0.0, potential = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    kinetic += 0.5 * dot(s.bodies[j].p, s.bodies[j].p) / s.masses[j];
    for (std::size_t k = j + 1; k < s.size(); ++k) {
      const double r = norm(s.bodies[j].q - s.bodies[k].q);
      if (!(r > 0.0)) throw Error(Errc::Collision, "bodies " + std::to_string(j) + " and " + std::to_string(k));
      potential -= s.masses[j] * s.masses[k] / r;
    }
  }
  return kinetic + potential;
}

}  // namespace

double reduced_hamiltonian(const JacobiState& j) {
  return cartesian_energy(from_jacobi(j));
}

double reduced_hamiltonian_closed_form(const JacobiState& j) {
  if (j.masses.size() != 3) throw Error(Errc::InvalidState, "closed form is for three bodies");
  const double m0 = j.masses[0], m1 = j.masses[1], m2 = j.masses[2];
  const double s0 = m0 / (m0 + m1), s1 = m1 / (m0 + m1);
  const double mu1 = j.reduced_mass(1), mu2 = j.reduced_mass(2);
  const JacobiPair& a = j.pairs[0];
  const JacobiPair& b = j.pairs[1];
  const double r01 = norm(a.Q), r02 = norm(b.Q + s1 * a.Q), r12 = norm(b.Q - s0 * a.Q);
  if (!(r01 > 0.0 && r02 > 0.0 && r12 > 0.0)) throw Error(Errc::Collision, "three-body closed form");
  return dot(a.P, a.P) / (2.0 * mu1) + dot(b.P, b.P) / (2.0 * mu2) - m0 * m1 / r01 -
         m0 * m2 / r02 - m1 * m2 / r12;
}

Vector reduced_vector(const JacobiState& j) {
  const auto n = static_cast<Eigen::Index>(j.pairs.size());
  Vector x(6 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const JacobiPair& pr = j.pairs[static_cast<std::size_t>(i)];
    x.segment<3>(3 * i) << pr.P.x, pr.P.y, pr.P.z;
    x.segment<3>(3 * n + 3 * i) << pr.Q.x, pr.Q.y, pr.Q.z;
  }
  return x;
}

JacobiState from_reduced_vector(const Vector& x, std::span<const double> masses) {
  if (masses.size() < 2 || x.size() != 6 * static_cast<Eigen::Index>(masses.size() - 1))
    throw Error(Errc::DimensionMismatch, "reduced Jacobi vector must have length 6 (N - 1)");
  const Eigen::Index n = x.size() / 6;
  JacobiState j;
  j.masses.assign(masses.begin(), masses.end());
  j.pairs.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    JacobiPair& pr = j.pairs[static_cast<std::size_t>(i)];
    pr.P = {x[3 * i], x[3 * i + 1], x[3 * i + 2]};
    pr.Q = {x[3 * n + 3 * i], x[3 * n + 3 * i + 1], x[3 * n + 3 * i + 2]};
  }
  return j;
}

Vec3 barycenter(const PhaseState& state) {
  Vec3 s;
  double m = 0.0;
  for (std::size_t j = 0; j < state.size(); ++j) {
    s += state.masses[j] * state.bodies[j].q;
    m += state.masses[j];
  }
  return s / m;
}

namespace {

template <typename V, typename S>
V jacobi_map(std::span<const double> m, const V& x, bool forward) {
  const std::size_t n = m.size();
  std::vector<BasicVec3<S>> a(n), b(n), c(n), d(n);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = {x[3 * k], x[3 * k + 1], x[3 * k + 2]};
    b[k] = {x[3 * n + 3 * k], x[3 * n + 3 * k + 1], x[3 * n + 3 * k + 2]};
  }
  if (forward)
    forward_linear<BasicVec3<S>>(m, a, b, c, d);
  else
    inverse_linear<BasicVec3<S>>(m, a, b, c, d);
  V y(6 * n);
  for (std::size_t k = 0; k < n; ++k) {
    y[3 * k] = c[k].x;
    y[3 * k + 1] = c[k].y;
    y[3 * k + 2] = c[k].z;
    y[3 * n + 3 * k] = d[k].x;
    y[3 * n + 3 * k + 1] = d[k].y;
    y[3 * n + 3 * k + 2] = d[k].z;
  }
  return y;
}

}  // namespace

Chart jacobi_chart(std::span<const double> masses) {
  std::vector<double> m(masses.begin(), masses.end());
  if (m.size() < 2) throw Error(Errc::InvalidState, "Jacobi chart needs N >= 2");
  for (double mk : m)
    if (!(mk > 0.0) || !std::isfinite(mk)) throw Error(Errc::InvalidState, "masses must be positive");
  const std::size_t dim = 6 * m.size();
  Chart c;
  c.name = "jacobi" + std::to_string(m.size());
  c.dim = dim;
  c.forward = [m](const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != 6 * m.size()) throw Error(Errc::DimensionMismatch, "jacobi chart");
    return jacobi_map<Vector, double>(m, x, true);
  };
  c.inverse = [m](const Vector& y) {
    if (static_cast<std::size_t>(y.size()) != 6 * m.size()) throw Error(Errc::DimensionMismatch, "jacobi chart");
    return jacobi_map<Vector, double>(m, y, false);
  };
  c.in_domain = [m](const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != 6 * m.size() || !x.allFinite()) return false;
    const PhaseState s = unflatten(x, m);
    for (std::size_t j = 0; j < s.size(); ++j)
      for (std::size_t k = j + 1; k < s.size(); ++k)
        if (!(norm(s.bodies[j].q - s.bodies[k].q) > 0.0)) return false;
    return true;
  };
  c.pairing = standard_pairing(dim / 2);
  c.periodic.assign(dim, false);
  c.forward_dual = [m](const DualVector& x) { return jacobi_map<DualVector, Dual>(m, x, true); };
  return c;
}

}  // namespace cmech
