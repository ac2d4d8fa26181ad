#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmech/chart.hpp"
#include "cmech/jacobi.hpp"

namespace cmech {

/// Default certification tolerance for finite-difference checks.
inline constexpr double kCertifyTol = 1e-6;

enum class DiffScheme { CentralDifference, DualNumber };

std::string_view to_string(DiffScheme scheme);

/// Per-coordinate central-difference steps h_i = eps^(1/3) max(1, |x_i|).
Vector fd_steps(const Vector& x);

/// d(target)/d(source) by central differences. Periodic target components
/// are differenced modulo 2pi. Throws Error(DomainViolation) if a probe
/// leaves the chart domain.
Matrix jacobian(const Chart& chart, const Vector& x);

Matrix jacobian(const Chart& chart, const Vector& x, DiffScheme scheme);

struct SymplecticReport {
  Vector point;
  double max_defect = 0.0;  // max |J Omega J^T - Omega_pairing|
  Matrix bracket_matrix;    // {y_i, y_j} in target order
  Matrix expected;          // canonical pattern of the declared pairing
  bool pass = false;
  double tol = 0.0;
  DiffScheme scheme = DiffScheme::CentralDifference;
  Vector steps;             // empty for the dual scheme
};

SymplecticReport certify_symplectic(const Chart& chart, const Vector& x, double tol = kCertifyTol,
                                    DiffScheme scheme = DiffScheme::CentralDifference);

/// A scalar function of the canonical source coordinates.
struct Observable {
  std::function<double(const Vector&)> fn;
  bool periodic = false;
};

/// Component `index` of a chart's target.
Observable chart_component(const Chart& chart, std::size_t index);

Vector gradient(const Observable& f, const Vector& x);

/// {f, g} = grad(f)^T Omega grad(g) by central differences.
double bracket(const Observable& f, const Observable& g, const Vector& x);

/// Restriction of the canonical form to the common kernel of the rows of
/// `constraint_gradients`.
struct RestrictedForm {
  std::size_t tangent_dim = 0;
  std::size_t rank = 0;
  double min_singular = 0.0;
};

RestrictedForm restricted_form(const Matrix& constraint_gradients, double rank_tol);

struct CrossSectionReport {
  std::size_t points = 0;
  std::size_t tangent_dim = 0;
  std::size_t min_rank = 0;
  double min_singular = 0.0;
  bool pass = false;
  std::vector<RestrictedForm> per_point;
};

/// The submanifold of reduced Jacobi space on which the direction of the
/// total angular momentum is fixed. Each point must have C != 0 along the
/// common direction `direction`. Throws Error(ZeroAngularMomentum) or
/// Error(InvalidState) when a point does not lie on it.
CrossSectionReport check_cross_section(std::span<const JacobiState> points, const Vec3& direction,
                                       double tol = kCertifyTol);

/// Same check on the level sets of the listed reduced-vector coordinates;
/// used as a negative control.
CrossSectionReport check_coordinate_section(std::span<const JacobiState> points,
                                            std::span<const std::size_t> fixed_indices,
                                            double tol = kCertifyTol);

/// Gradients (rows) of the two constraints e1.C = e2.C = 0, e1, e2 orthogonal
/// to `direction`.
Matrix direction_constraint_gradients(const JacobiState& j, const Vec3& direction);

struct DFactor {
  double D = 0.0;        // 1 / {Phi2, phi2}
  double bracket = 0.0;  // {Phi2, phi2}
  double max_defect = 0.0;
};

/// D in omega = omega_0 + D dPhi2 ^ dphi2, read off the bracket matrix of
/// the chart's declared moment pair. Throws Error(InvalidState) if the chart
/// declares none.
DFactor measure_d_factor(const Chart& chart, const Vector& x,
                         DiffScheme scheme = DiffScheme::CentralDifference);

/// A chart together with an in-domain probe point.
struct ChartSample {
  Chart chart;
  Vector point;
};

struct SweepEntry {
  std::size_t index = 0;
  SymplecticReport report;
  std::optional<DFactor> d_factor;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // ordered by point index
  double worst_defect = 0.0;
  bool all_pass = false;
};

/// Certify `points` samples drawn by `sampler(index)`. Entries are
/// independent of `threads`.
SweepResult certify_sweep(const std::function<ChartSample(std::size_t)>& sampler, std::size_t points,
                          double tol, unsigned threads = 1);

/// `defect=<val> pass=<0|1> seed=<n>`
std::string machine_line(const SymplecticReport& report, std::uint64_t seed);

/// Fixed-width table of the bracket matrix.
std::string format_bracket_table(const SymplecticReport& report);

}  // namespace cmech
