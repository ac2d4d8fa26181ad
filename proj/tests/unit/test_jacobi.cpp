#include <gtest/gtest.h>

#include "cmech/dynamics.hpp"
#include "cmech/errors.hpp"
#include "cmech/jacobi.hpp"
#include "cmech/sampling.hpp"
#include "cmech/symcheck.hpp"
#include "oracles.hpp"

using namespace cmech;

namespace {

PhaseState equal_mass_triangle() {
  return {{Body{{0, 0, 0}, {}}, Body{{1, 0, 0}, {}}, Body{{0, 1, 0}, {}}}, {1, 1, 1}};
}

PhaseState random_state(Rng& rng, std::size_t n) {
  PhaseState s;
  s.masses = sample_masses(rng, n);
  for (std::size_t j = 0; j < n; ++j)
    s.bodies.push_back({{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)},
                        {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}});
  return s;
}

double rel(const PhaseState& a, const PhaseState& b) {
  return oracle::rel_diff(flatten(a), flatten(b));
}

}  // namespace

TEST(ToJacobi, EqualMassTriangle) {
  const JacobiSplit j = to_jacobi(equal_mass_triangle());
  EXPECT_EQ(j.state.pair(1).Q, (Vec3{1, 0, 0}));
  EXPECT_EQ(j.state.pair(2).Q, (Vec3{-0.5, 1, 0}));
  EXPECT_EQ(j.state.pair(1).P, Vec3{});
  EXPECT_EQ(j.state.pair(2).P, Vec3{});
  EXPECT_EQ(j.anchor.Q0, Vec3{});
}

TEST(ToJacobi, ThreeBodySigmaFormulas) {
  // P1 = p1 + s1 p2, P2 = p2, Q1 = q1 - q0, Q2 = q2 - s0 q0 - s1 q1 with
  // s0 = m0 / (m0 + m1), s1 = m1 / (m0 + m1).
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const PhaseState s = random_state(rng, 3);
    const double s0 = s.masses[0] / (s.masses[0] + s.masses[1]), s1 = 1 - s0;
    const auto& b = s.bodies;
    const JacobiSplit j = to_jacobi(s);
    auto near = [](const Vec3& a, const Vec3& c) { return max_abs(a - c) < 1e-14 * std::max(1.0, max_abs(c)); };
    EXPECT_TRUE(near(j.state.pair(1).P, b[1].p + s1 * b[2].p));
    EXPECT_TRUE(near(j.state.pair(2).P, b[2].p));
    EXPECT_TRUE(near(j.state.pair(1).Q, b[1].q - b[0].q));
    EXPECT_TRUE(near(j.state.pair(2).Q, b[2].q - s0 * b[0].q - s1 * b[1].q));
    EXPECT_TRUE(near(j.anchor.P0, b[0].p + b[1].p + b[2].p));
    EXPECT_DOUBLE_EQ(j.state.reduced_mass(1), 1.0 / (1.0 / s.masses[0] + 1.0 / s.masses[1]));
    EXPECT_NEAR(j.state.reduced_mass(2), 1.0 / (1.0 / (s.masses[0] + s.masses[1]) + 1.0 / s.masses[2]), 1e-15);
  }
}

TEST(ToJacobi, TwoBodies) {
  PhaseState s{{Body{{0.5, 0, 0}, {0, -1, 0}}, Body{{2, 1, 0}, {0.25, 1, 0.5}}}, {1, 3}};
  const JacobiSplit j = to_jacobi(s);
  EXPECT_EQ(j.state.pair(1).Q, s.bodies[1].q - s.bodies[0].q);
  EXPECT_EQ(j.state.pair(1).P, s.bodies[1].p);
}

TEST(FromJacobi, RoundTrips) {
  Rng rng(22);
  for (std::size_t n : {3u, 4u, 5u})
    for (int t = 0; t < 30; ++t) {
      const PhaseState s = random_state(rng, n);
      const JacobiSplit j = to_jacobi(s);
      EXPECT_LT(rel(from_jacobi(j.state, j.anchor), s), 1e-12);
    }
  const PhaseState tri = equal_mass_triangle();
  const JacobiSplit j = to_jacobi(tri);
  EXPECT_LT(rel(from_jacobi(j.state, j.anchor), tri), 1e-15);
}

TEST(FromJacobi, WithoutAnchorZeroMomentumAndBarycentre) {
  Rng rng(23);
  for (int t = 0; t < 30; ++t) {
    const PhaseState s = random_state(rng, 4);
    const PhaseState r = from_jacobi(to_jacobi(s).state);
    EXPECT_LT(max_abs(total_momentum(r)), 1e-14);
    Vec3 mq;
    double mt = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      mq += r.masses[k] * r.bodies[k].q;
      mt += r.masses[k];
    }
    EXPECT_LT(max_abs(mq / mt), 1e-14);
  }
}

TEST(ReducedHamiltonian, EqualMassTriangleIsPurePotential) {
  const JacobiState j = to_jacobi(equal_mass_triangle()).state;
  EXPECT_NEAR(reduced_hamiltonian(j), -(2 + 1 / std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(reduced_hamiltonian_closed_form(j), -(2 + 1 / std::sqrt(2.0)), 1e-15);
}

TEST(ReducedHamiltonian, PullbackMatchesCartesianEnergy) {
  Rng rng(24);
  for (int t = 0; t < 100; ++t) {
    PhaseState s = random_state(rng, 3);
    // remove the total momentum
    const Vec3 P = total_momentum(s);
    double mt = 0;
    for (double m : s.masses) mt += m;
    for (std::size_t k = 0; k < 3; ++k) s.bodies[k].p -= P * (s.masses[k] / mt);
    const JacobiState j = to_jacobi(s).state;
    const double F = oracle::energy(s);
    EXPECT_LT(std::abs(reduced_hamiltonian(j) - F), 1e-12 * std::abs(F));
    EXPECT_LT(std::abs(reduced_hamiltonian_closed_form(j) - reduced_hamiltonian(j)), 1e-12 * std::abs(F));
  }
}

TEST(ReducedHamiltonian, RotationInvariant) {
  Rng rng(25);
  for (int t = 0; t < 20; ++t) {
    JacobiState j = sample_jacobi_state(rng, 3);
    const double F = reduced_hamiltonian(j);
    const Mat3 R = random_rotation(rng);
    for (JacobiPair& p : j.pairs) {
      p.P = R * p.P;
      p.Q = R * p.Q;
    }
    EXPECT_LT(std::abs(reduced_hamiltonian(j) - F), 1e-12 * std::abs(F));
  }
}

TEST(Jacobi, AngularMomentumSplits) {
  Rng rng(26);
  for (int t = 0; t < 20; ++t) {
    const PhaseState s = random_state(rng, 3);
    const JacobiSplit j = to_jacobi(s);
    Vec3 C = cross(j.anchor.Q0, j.anchor.P0);
    for (const JacobiPair& p : j.state.pairs) C += cross(p.Q, p.P);
    const Vec3 want = total_angular_momentum(s);
    EXPECT_LT(max_abs(C - want), 1e-12 * std::max(1.0, max_abs(want)));
  }
}

TEST(Jacobi, ChartIsCertified) {
  Rng rng(27);
  for (std::size_t n : {3u, 4u}) {
    const PhaseState s = random_state(rng, n);
    const Chart c = jacobi_chart(s.masses);
    const SymplecticReport r = certify_symplectic(c, flatten(s));
    EXPECT_TRUE(r.pass) << r.max_defect;
    EXPECT_LT(r.max_defect, 1e-9);
  }
}

TEST(Jacobi, ValidateRejectsCollision) {
  JacobiState j = to_jacobi(equal_mass_triangle()).state;
  j.pairs[0].Q = Vec3{};
  EXPECT_THROW(validate(j), Error);
  EXPECT_THROW(reduced_hamiltonian(j), Error);
}
