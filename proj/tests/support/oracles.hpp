#pragma once

// Reference computations used by the tests. Each one is derived from a
// different formulation than the library code it checks.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "cmech/phasespace.hpp"

namespace oracle {

using cmech::Vec3;

/// Eccentric anomaly by plain bisection on the monotone E - e sin E - M.
inline double kepler_bisection(double M, double e) {
  M = std::fmod(M, 2 * std::numbers::pi);
  if (M < 0) M += 2 * std::numbers::pi;
  double lo = 0.0, hi = 2 * std::numbers::pi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid - e * std::sin(mid) - M > 0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// Classical perifocal construction: r = R3(-node) R1(-i) R3(-peri) r_pf.
struct TwoBody {
  Vec3 Q, P;
};

inline TwoBody perifocal_state(double a, double e, double inc, double peri, double node, double M, double mu,
                               double Mg) {
  const double E = kepler_bisection(M, e);
  const double nu = 2 * std::atan2(std::sqrt(1 + e) * std::sin(E / 2), std::sqrt(1 - e) * std::cos(E / 2));
  const double p = a * (1 - e * e);
  const double r = p / (1 + e * std::cos(nu));
  const double k = std::sqrt(Mg / p);
  const Eigen::Vector3d r_pf(r * std::cos(nu), r * std::sin(nu), 0.0);
  const Eigen::Vector3d v_pf(-k * std::sin(nu), k * (e + std::cos(nu)), 0.0);
  const Eigen::Matrix3d R = (Eigen::AngleAxisd(node, Eigen::Vector3d::UnitZ()) *
                             Eigen::AngleAxisd(inc, Eigen::Vector3d::UnitX()) *
                             Eigen::AngleAxisd(peri, Eigen::Vector3d::UnitZ()))
                                .toRotationMatrix();
  const Eigen::Vector3d q = R * r_pf, v = R * v_pf;
  return {{q.x(), q.y(), q.z()}, {mu * v.x(), mu * v.y(), mu * v.z()}};
}

/// Direct pairwise sum of kinetic and potential energy.
inline double energy(const cmech::PhaseState& s) {
  double T = 0.0, U = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Vec3& p = s.bodies[j].p;
    T += (p.x * p.x + p.y * p.y + p.z * p.z) / (2 * s.masses[j]);
    for (std::size_t k = 0; k < j; ++k) {
      const Vec3 d = s.bodies[j].q - s.bodies[k].q;
      U -= s.masses[j] * s.masses[k] / std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
    }
  }
  return T + U;
}

/// Fourth-order central difference of a scalar function.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Orthonormal kernel basis of `A` (rows = constraints) via full-pivot LU
/// followed by a QR orthonormalisation.
inline Eigen::MatrixXd kernel(const Eigen::MatrixXd& A) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(1e-10);
  const Eigen::MatrixXd K = lu.kernel();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(K);
  return qr.householderQ() * Eigen::MatrixXd::Identity(K.rows(), K.cols());
}

/// Smallest singular value of the canonical form restricted to ker(A).
inline double restricted_min_singular(const Eigen::MatrixXd& A, std::size_t* dim = nullptr) {
  const Eigen::MatrixXd T = kernel(A);
  const Eigen::Index n = A.cols() / 2;
  Eigen::MatrixXd Om = Eigen::MatrixXd::Zero(A.cols(), A.cols());
  Om.topRightCorner(n, n).setIdentity();
  Om.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  if (dim) *dim = static_cast<std::size_t>(T.cols());
  const Eigen::MatrixXd W = T.transpose() * Om * T;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(W).singularValues().minCoeff();
}

/// Relative infinity-norm distance.
inline double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

/// Reduced Jacobi vector difference with the angles of a Deprit or
/// Delaunay vector compared modulo 2 pi.
inline double angle_aware_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const std::vector<bool>& periodic) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    if (periodic[static_cast<std::size_t>(i)]) d = std::remainder(d, 2 * std::numbers::pi);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

}  // namespace oracle
