#include <gtest/gtest.h>

#include <numbers>

#include "cmech/errors.hpp"
#include "cmech/kepler.hpp"
#include "cmech/sampling.hpp"
#include "cmech/symcheck.hpp"
#include "oracles.hpp"

using namespace cmech;
constexpr double pi = std::numbers::pi;

TEST(SolveKepler, Examples) {
  EXPECT_EQ(solve_kepler(1.0, 0.0), 1.0);
  EXPECT_NEAR(solve_kepler(pi, 0.5), pi, 1e-15);
  EXPECT_NEAR(solve_kepler(1.0, 0.5), oracle::kepler_bisection(1.0, 0.5), 1e-14);
}

TEST(SolveKepler, ResidualOnGrid) {
  double worst = 0.0;
  for (int i = 0; i < 40; ++i)
    for (int k = 0; k < 25; ++k) {
      const double M = -3.0 + 10.0 * i / 39.0;
      const double e = 0.99 * k / 24.0;
      const double E = solve_kepler(M, e);
      worst = std::max(worst, std::abs(std::remainder(E - e * std::sin(E) - M, 2 * pi)));
      EXPECT_GE(E, 0.0);
      EXPECT_LT(E, 2 * pi);
    }
  EXPECT_LT(worst, 1e-13);
}

TEST(SolveKepler, RejectsBadEccentricity) {
  for (double e : {-0.1, 1.0, 1.5}) {
    try {
      solve_kepler(1.0, e);
      FAIL() << e;
    } catch (const Error& err) {
      EXPECT_EQ(err.code(), Errc::InvalidEccentricity);
    }
  }
  try {
    solve_kepler(1.0, std::nan(""));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::NonFinite);
  }
}

TEST(Elements, CircularEquatorial) {
  const OrbitalElements el = cartesian_to_elements({1, 0, 0}, {0, 1, 0}, 1, 1);
  EXPECT_NEAR(el.a, 1.0, 1e-15);
  EXPECT_NEAR(el.e, 0.0, 1e-15);
  EXPECT_TRUE(el.flags.circular);
  EXPECT_TRUE(el.flags.horizontal);
  EXPECT_EQ(el.inclination, 0.0);
}

TEST(Elements, HyperbolicIsNonElliptic) {
  try {
    cartesian_to_elements({1, 0, 0}, {0, 2, 0}, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonElliptic);
  }
}

TEST(Elements, RectilinearRejected) {
  try {
    cartesian_to_elements({1, 0, 0}, {0.5, 0, 0}, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Rectilinear);
  }
}

TEST(Elements, ToCartesianExamples) {
  OrbitalElements el;
  el.flags = {true, true, false};
  KeplerState k = elements_to_cartesian(el, 1, 1);
  EXPECT_LT(max_abs(k.Q - Vec3{1, 0, 0}), 1e-15);
  EXPECT_LT(max_abs(k.P - Vec3{0, 1, 0}), 1e-15);
  el.inclination = pi / 2;
  el.flags.horizontal = false;
  k = elements_to_cartesian(el, 1, 1);
  EXPECT_LT(max_abs(k.Q - Vec3{1, 0, 0}), 1e-15);
  EXPECT_LT(max_abs(k.P - Vec3{0, 0, 1}), 1e-15);
}

TEST(Elements, MatchesPerifocalOracle) {
  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const double mu = rng.uniform(0.5, 2), M = rng.uniform(0.5, 2);
    OrbitalElements el = sample_elements(rng, 0.5, 5);
    el.e = rng.uniform(0.01, 0.95);
    const KeplerState k = elements_to_cartesian(el, mu, M);
    const oracle::TwoBody o = oracle::perifocal_state(el.a, el.e, el.inclination, el.arg_pericenter, el.node,
                                                      el.mean_anomaly, mu, M);
    EXPECT_LT(max_abs(k.Q - o.Q), 1e-12 * el.a);
    EXPECT_LT(max_abs(k.P - o.P), 1e-12 * mu * std::sqrt(M / el.a) / (1 - el.e));
  }
}

TEST(Elements, RoundTripAndEnergy) {
  Rng rng(32);
  for (int t = 0; t < 200; ++t) {
    const double mu = rng.uniform(0.5, 2), M = rng.uniform(0.5, 2);
    OrbitalElements el = sample_elements(rng, 0.5, 5);
    el.e = rng.uniform(0.01, 0.95);
    const KeplerState k = elements_to_cartesian(el, mu, M);
    EXPECT_LT(std::abs(two_body_energy(k.Q, k.P, mu, M) + mu * M / (2 * el.a)), 1e-12 * mu * M / el.a);
    const OrbitalElements back = cartesian_to_elements(k.Q, k.P, mu, M);
    EXPECT_NEAR(back.a, el.a, 1e-10 * el.a);
    EXPECT_NEAR(back.e, el.e, 1e-10);
    EXPECT_NEAR(back.inclination, el.inclination, 1e-10);
    EXPECT_NEAR(angle_difference(back.arg_pericenter, el.arg_pericenter), 0, 1e-10);
    EXPECT_NEAR(angle_difference(back.node, el.node), 0, 1e-10);
    EXPECT_NEAR(angle_difference(back.mean_anomaly, el.mean_anomaly), 0, 1e-10);
    const KeplerState k2 = elements_to_cartesian(back, mu, M);
    EXPECT_LT(max_abs(k2.Q - k.Q) / norm(k.Q), 1e-10);
    EXPECT_LT(max_abs(k2.P - k.P) / norm(k.P), 1e-10);
  }
}

TEST(Delaunay, DirectSubstitution) {
  OrbitalElements el;
  el.a = 4;
  el.e = std::sqrt(3.0) / 2;
  el.inclination = pi / 3;
  const DelaunayElements d = elements_to_delaunay(el, 1, 1);
  EXPECT_NEAR(d.L, 2, 1e-15);
  EXPECT_NEAR(d.G, 1, 1e-15);
  EXPECT_NEAR(d.H, 0.5, 1e-15);
  const OrbitalElements back = delaunay_to_elements(d, 1, 1);
  EXPECT_NEAR(back.a, 4, 1e-14);
  EXPECT_NEAR(back.e, el.e, 1e-15);
  EXPECT_NEAR(back.inclination, pi / 3, 1e-15);
}

TEST(Delaunay, CircularEquatorialAllEqual) {
  OrbitalElements el;
  el.flags = {true, true, false};
  const DelaunayElements d = elements_to_delaunay(el, 1, 1);
  EXPECT_EQ(d.L, 1.0);
  EXPECT_EQ(d.G, 1.0);
  EXPECT_EQ(d.H, 1.0);
  EXPECT_TRUE(d.flags.circular);
}

TEST(Delaunay, AlgebraicInverse) {
  Rng rng(33);
  for (int t = 0; t < 100; ++t) {
    const double mu = rng.uniform(0.5, 2), M = rng.uniform(0.5, 2);
    DelaunayElements d;
    d.L = rng.uniform(0.2, 3);
    d.G = d.L * rng.uniform(0.05, 0.999);
    d.H = d.G * rng.uniform(-0.999, 0.999);
    const OrbitalElements el = delaunay_to_elements(d, mu, M);
    // independent inverse: a from L, e from G/L, i from H/G
    EXPECT_NEAR(el.a, d.L * d.L / (mu * mu * M), 1e-12 * el.a);
    EXPECT_NEAR(el.e, std::sqrt(1 - (d.G / d.L) * (d.G / d.L)), 1e-12);
    EXPECT_NEAR(el.inclination, std::acos(d.H / d.G), 1e-12);
  }
}

TEST(Delaunay, InvalidElementsRejected) {
  DelaunayElements d;
  d.L = 1;
  d.G = 1.5;
  d.H = 0.5;
  EXPECT_THROW(delaunay_to_elements(d, 1, 1), Error);
  d.G = 0.5;
  d.H = 0.7;
  EXPECT_THROW(delaunay_to_elements(d, 1, 1), Error);
}

TEST(Delaunay, AngularMomentumIdentities) {
  Rng rng(34);
  for (int t = 0; t < 100; ++t) {
    const double mu = rng.uniform(0.5, 2), M = rng.uniform(0.5, 2);
    const KeplerState k = elements_to_cartesian(sample_elements(rng, 0.5, 5), mu, M);
    const DelaunayElements d = cartesian_to_delaunay(k.Q, k.P, mu, M);
    const Vec3 c = cross(k.Q, k.P);
    EXPECT_NEAR(d.G, norm(c), 1e-12 * norm(c));
    EXPECT_NEAR(d.H, c.z, 1e-12 * norm(c));
    EXPECT_LE(d.G, d.L);
    EXPECT_LE(std::abs(d.H), d.G);
  }
}

TEST(Delaunay, CircularFlagForcesGEqualL) {
  const DelaunayElements d = cartesian_to_delaunay({1, 0, 0}, {0, 0.6, 0.8}, 1, 1);
  EXPECT_TRUE(d.flags.circular);
  EXPECT_FALSE(d.flags.horizontal);
  EXPECT_EQ(d.G, d.L);
}

TEST(Energy, KeplerianEnergyAndMeanMotion) {
  EXPECT_DOUBLE_EQ(keplerian_energy(1, 1, 1), -0.5);
  EXPECT_DOUBLE_EQ(mean_motion(1, 1, 1), 1.0);
  Rng rng(35);
  for (int t = 0; t < 50; ++t) {
    const double mu = rng.uniform(0.5, 2), M = rng.uniform(0.5, 2), L = rng.uniform(0.3, 3);
    const double n = mean_motion(L, mu, M);
    const double fd = oracle::derivative([&](double x) { return keplerian_energy(x, mu, M); }, L, 1e-3 * L);
    EXPECT_NEAR(fd, n, 1e-8 * n);
    const double a = L * L / (mu * mu * M);
    EXPECT_NEAR(n, std::sqrt(M / (a * a * a)), 1e-13 * n);
  }
}

TEST(Energy, KeplerianMatchesCartesian) {
  Rng rng(36);
  for (int t = 0; t < 100; ++t) {
    const double mu = rng.uniform(0.5, 2), M = rng.uniform(0.5, 2);
    const KeplerState k = elements_to_cartesian(sample_elements(rng, 0.5, 5), mu, M);
    const DelaunayElements d = cartesian_to_delaunay(k.Q, k.P, mu, M);
    const double E = two_body_energy(k.Q, k.P, mu, M);
    EXPECT_NEAR(keplerian_energy(d.L, mu, M), E, 1e-12 * std::abs(E));
  }
}

TEST(DelaunayChart, DerivativeOfLMatchesAnalytic) {
  // L = mu sqrt(M a) with a = -mu M / (2E): dL/dP = mu sqrt(M) a^{3/2} P / (mu^2 M)
  Rng rng(37);
  for (int t = 0; t < 20; ++t) {
    const double mu = rng.uniform(0.5, 2), M = rng.uniform(0.5, 2);
    const KeplerState k = elements_to_cartesian(sample_elements(rng, 1, 2), mu, M);
    const Chart c = delaunay_chart(mu, M);
    Vector x(6);
    x << k.P.x, k.P.y, k.P.z, k.Q.x, k.Q.y, k.Q.z;
    const Matrix J = jacobian(c, x);
    const double E = two_body_energy(k.Q, k.P, mu, M);
    const double a = -mu * M / (2 * E);
    const double s = std::sqrt(M) * std::pow(a, 1.5) / (mu * M);
    EXPECT_NEAR(J(0, 0), s * k.P.x, 1e-7);
    EXPECT_NEAR(J(0, 1), s * k.P.y, 1e-7);
    EXPECT_NEAR(J(0, 2), s * k.P.z, 1e-7);
  }
}

TEST(DelaunayChart, RoundTripAndDomain) {
  Rng rng(38);
  const Chart c = delaunay_chart(1.3, 0.7);
  for (int t = 0; t < 100; ++t) {
    const KeplerState k = elements_to_cartesian(sample_elements(rng, 0.5, 5), 1.3, 0.7);
    Vector x(6);
    x << k.P.x, k.P.y, k.P.z, k.Q.x, k.Q.y, k.Q.z;
    ASSERT_TRUE(c.in_domain(x));
    EXPECT_LT(oracle::rel_diff(c.inverse(c.forward(x)), x), 1e-10);
  }
  Vector flat(6);
  flat << 0, 1, 0, 1, 0, 0;
  EXPECT_FALSE(c.in_domain(flat));
}
