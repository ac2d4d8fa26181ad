#include "cmech/chart.hpp"

#include <string>

#include "cmech/errors.hpp"

namespace cmech {

void validate_chart(const Chart& chart) {
  if (chart.dim == 0 || chart.dim % 2 != 0)
    throw Error(Errc::InvalidState, "chart '" + chart.name + "' must have even positive dimension");
  if (chart.periodic.size() != chart.dim)
    throw Error(Errc::InvalidState, "chart '" + chart.name + "' periodic flags have wrong length");
  if (chart.pairing.size() * 2 != chart.dim)
    throw Error(Errc::InvalidState, "chart '" + chart.name + "' pairing must cover dim / 2 pairs");
  std::vector<int> seen(chart.dim, 0);
  for (const auto& [a, b] : chart.pairing) {
    if (a >= chart.dim || b >= chart.dim)
      throw Error(Errc::InvalidState, "chart '" + chart.name + "' pairing index out of range");
    ++seen[a];
    ++seen[b];
  }
  for (int s : seen)
    if (s != 1) throw Error(Errc::InvalidState, "chart '" + chart.name + "' pairing is not a partition");
  if (chart.moment_pair && *chart.moment_pair >= chart.pairing.size())
    throw Error(Errc::InvalidState, "chart '" + chart.name + "' moment pair out of range");
  if (!chart.forward || !chart.inverse || !chart.in_domain)
    throw Error(Errc::InvalidState, "chart '" + chart.name + "' is missing a map");
}

Pairing standard_pairing(std::size_t n) {
  Pairing p;
  p.reserve(n);
  for (std::size_t i = 0; i < n; ++i) p.emplace_back(i, i + n);
  return p;
}

Matrix pairing_matrix(const Pairing& pairing, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix m = Matrix::Zero(d, d);
  for (const auto& [a, b] : pairing) {
    m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1.0;
    m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = -1.0;
  }
  return m;
}

Chart identity_chart(std::size_t dim) {
  Chart c;
  c.name = "identity";
  c.dim = dim;
  c.forward = [](const Vector& x) { return x; };
  c.inverse = [](const Vector& x) { return x; };
  c.in_domain = [](const Vector& x) { return x.allFinite(); };
  c.pairing = standard_pairing(dim / 2);
  c.periodic.assign(dim, false);
  c.forward_dual = [](const DualVector& x) { return x; };
  return c;
}

Chart scaling_chart(std::size_t dim, double factor) {
  Chart c = identity_chart(dim);
  c.name = "scaled";
  c.forward = [factor](const Vector& x) -> Vector { return factor * x; };
  c.inverse = [factor](const Vector& x) -> Vector { return x / factor; };
  c.forward_dual = [factor](const DualVector& x) {
    DualVector y(x);
    for (Dual& v : y) v *= Dual(factor);
    return y;
  };
  return c;
}

Chart compose_charts(const Chart& a, const Chart& b) {
  if (a.dim != b.dim)
    throw Error(Errc::DimensionMismatch,
                "cannot compose '" + a.name + "' (dim " + std::to_string(a.dim) + ") with '" +
                    b.name + "' (dim " + std::to_string(b.dim) + ")");
  Chart c;
  c.name = a.name + "+" + b.name;
  c.dim = a.dim;
  c.forward = [fa = a.forward, fb = b.forward](const Vector& x) { return fb(fa(x)); };
  c.inverse = [ia = a.inverse, ib = b.inverse](const Vector& y) { return ia(ib(y)); };
  c.in_domain = [da = a.in_domain, db = b.in_domain, fa = a.forward](const Vector& x) {
    return da(x) && db(fa(x));
  };
  c.pairing = b.pairing;
  c.periodic = b.periodic;
  c.moment_pair = b.moment_pair;
  if (a.forward_dual && b.forward_dual)
    c.forward_dual = [fa = a.forward_dual, fb = b.forward_dual](const DualVector& x) {
      return fb(fa(x));
    };
  return c;
}

namespace {

// Split (P_a, P_b, Q_a, Q_b) into the two factors' own orderings and back.
template <typename V>
std::pair<V, V> split_blocks(const V& x, std::size_t na, std::size_t nb) {
  V xa(2 * na), xb(2 * nb);
  for (std::size_t i = 0; i < na; ++i) {
    xa[i] = x[i];
    xa[na + i] = x[na + nb + i];
  }
  for (std::size_t i = 0; i < nb; ++i) {
    xb[i] = x[na + i];
    xb[nb + i] = x[2 * na + nb + i];
  }
  return {xa, xb};
}

template <typename V>
V join_blocks(const V& xa, const V& xb, std::size_t na, std::size_t nb) {
  V x(2 * (na + nb));
  for (std::size_t i = 0; i < na; ++i) {
    x[i] = xa[i];
    x[na + nb + i] = xa[na + i];
  }
  for (std::size_t i = 0; i < nb; ++i) {
    x[na + i] = xb[i];
    x[2 * na + nb + i] = xb[nb + i];
  }
  return x;
}

// Index of component k of a factor inside the product ordering.
std::size_t product_index(std::size_t k, std::size_t offset, std::size_t n_self, std::size_t n_total) {
  return k < n_self ? offset + k : n_total + offset + (k - n_self);
}

}  // namespace

Chart product_charts(const Chart& a, const Chart& b) {
  const std::size_t na = a.dim / 2, nb = b.dim / 2, n = na + nb;
  Chart c;
  c.name = a.name + "*" + b.name;
  c.dim = a.dim + b.dim;
  c.forward = [=, fa = a.forward, fb = b.forward](const Vector& x) {
    auto [xa, xb] = split_blocks(x, na, nb);
    return join_blocks<Vector>(fa(xa), fb(xb), na, nb);
  };
  c.inverse = [=, ia = a.inverse, ib = b.inverse](const Vector& y) {
    auto [ya, yb] = split_blocks(y, na, nb);
    return join_blocks<Vector>(ia(ya), ib(yb), na, nb);
  };
  c.in_domain = [=, da = a.in_domain, db = b.in_domain](const Vector& x) {
    auto [xa, xb] = split_blocks(x, na, nb);
    return da(xa) && db(xb);
  };
  c.periodic.assign(c.dim, false);
  for (std::size_t k = 0; k < a.dim; ++k) c.periodic[product_index(k, 0, na, n)] = a.periodic[k];
  for (std::size_t k = 0; k < b.dim; ++k) c.periodic[product_index(k, na, nb, n)] = b.periodic[k];
  for (const auto& [p, q] : a.pairing)
    c.pairing.emplace_back(product_index(p, 0, na, n), product_index(q, 0, na, n));
  for (const auto& [p, q] : b.pairing)
    c.pairing.emplace_back(product_index(p, na, nb, n), product_index(q, na, nb, n));
  if (b.moment_pair)
    c.moment_pair = a.pairing.size() + *b.moment_pair;
  else if (a.moment_pair)
    c.moment_pair = a.moment_pair;
  if (a.forward_dual && b.forward_dual)
    c.forward_dual = [=, fa = a.forward_dual, fb = b.forward_dual](const DualVector& x) {
      auto [xa, xb] = split_blocks(x, na, nb);
      return join_blocks<DualVector>(fa(xa), fb(xb), na, nb);
    };
  return c;
}

Chart rescale_action(const Chart& chart, std::size_t pair_index, double factor) {
  if (pair_index >= chart.pairing.size())
    throw Error(Errc::InvalidState, "pair index out of range");
  const std::size_t k = chart.pairing[pair_index].first;
  const auto ki = static_cast<Eigen::Index>(k);
  Chart c = chart;
  c.name = chart.name + "-rescaled";
  c.forward = [f = chart.forward, ki, factor](const Vector& x) {
    Vector y = f(x);
    y[ki] *= factor;
    return y;
  };
  c.inverse = [g = chart.inverse, ki, factor](const Vector& y) {
    Vector z = y;
    z[ki] /= factor;
    return g(z);
  };
  if (chart.forward_dual)
    c.forward_dual = [f = chart.forward_dual, k, factor](const DualVector& x) {
      DualVector y = f(x);
      y[k] *= Dual(factor);
      return y;
    };
  return c;
}

Matrix dual_jacobian(const Chart& chart, const Vector& x) {
  if (!chart.forward_dual)
    throw Error(Errc::InvalidState, "chart '" + chart.name + "' has no dual-number forward map");
  require_finite(x, "dual_jacobian input");
  const std::size_t n = static_cast<std::size_t>(x.size());
  DualVector seeded;
  seeded.reserve(n);
  for (std::size_t i = 0; i < n; ++i) seeded.push_back(Dual::variable(x[static_cast<Eigen::Index>(i)], i, n));
  const DualVector y = chart.forward_dual(seeded);
  Matrix jac = Matrix::Zero(static_cast<Eigen::Index>(y.size()), x.size());
  for (std::size_t r = 0; r < y.size(); ++r)
    if (y[r].grad().size() != 0) jac.row(static_cast<Eigen::Index>(r)) = y[r].grad().transpose();
  return jac;
}

}  // namespace cmech
