#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmech/dual.hpp"
#include "cmech/phasespace.hpp"

namespace cmech {

using Pairing = std::vector<std::pair<std::size_t, std::size_t>>;
using DualVector = std::vector<Dual>;

/// A named invertible coordinate map from a canonical source (ordered per
/// the conventions in phasespace.hpp) to a target whose conjugate pairs
/// are declared in `pairing` as (action index, angle index).
struct Chart {
  std::string name;
  std::size_t dim = 0;
  std::function<Vector(const Vector&)> forward;
  std::function<Vector(const Vector&)> inverse;
  std::function<bool(const Vector&)> in_domain;
  Pairing pairing;
  /// Target components living on the circle; differences of these are
  /// taken modulo 2pi when differentiating.
  std::vector<bool> periodic;
  /// Index into `pairing` of the (vertical angular momentum, node angle)
  /// pair whose bracket measures the D factor, if the chart has one.
  std::optional<std::size_t> moment_pair;
  /// Optional forward map over dual numbers, for exact Jacobians.
  std::function<DualVector(const DualVector&)> forward_dual;
};

/// Throws Error(InvalidState) unless dim is even and positive, the pairing
/// covers every index exactly once and `periodic` has length dim.
void validate_chart(const Chart& chart);

/// Pairs (i, i + n) for i < n.
Pairing standard_pairing(std::size_t n);

/// Canonical pattern of a pairing: +1 at (action, angle), -1 at the mirror.
Matrix pairing_matrix(const Pairing& pairing, std::size_t dim);

Chart identity_chart(std::size_t dim);

/// (P, Q) -> (s P, s Q). Not canonical unless s = +-1.
Chart scaling_chart(std::size_t dim, double factor);

/// forward = b.forward o a.forward. Throws Error(DimensionMismatch).
Chart compose_charts(const Chart& a, const Chart& b);

/// Block-diagonal product acting on (P_a, P_b, Q_a, Q_b).
Chart product_charts(const Chart& a, const Chart& b);

/// Multiply the action of pair `pair_index` by `factor`. Used to build
/// negative controls for the D-factor measurement.
Chart rescale_action(const Chart& chart, std::size_t pair_index, double factor);

/// Evaluate forward through the dual-number path. Requires forward_dual.
Matrix dual_jacobian(const Chart& chart, const Vector& x);

}  // namespace cmech
