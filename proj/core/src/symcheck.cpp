#include "cmech/symcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

#include <Eigen/SVD>

#include "cmech/errors.hpp"

namespace cmech {

std::string_view to_string(DiffScheme scheme) {
  return scheme == DiffScheme::DualNumber ? "dual" : "central-difference";
}

Vector fd_steps(const Vector& x) {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  Vector h(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) h[i] = base * std::max(1.0, std::abs(x[i]));
  return h;
}

Matrix jacobian(const Chart& chart, const Vector& x) {
  require_finite(x, "jacobian probe point");
  if (static_cast<std::size_t>(x.size()) != chart.dim)
    throw Error(Errc::DimensionMismatch, "probe point does not match chart '" + chart.name + "'");
  if (!chart.in_domain(x)) throw Error(Errc::DomainViolation, "probe point outside chart '" + chart.name + "'");
  const Vector h = fd_steps(x);
  const auto dim = static_cast<Eigen::Index>(chart.dim);
  Matrix jac(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Vector xp = x, xm = x;
    xp[i] += h[i];
    xm[i] -= h[i];
    if (!chart.in_domain(xp) || !chart.in_domain(xm))
      throw Error(Errc::DomainViolation, "finite-difference probe left chart '" + chart.name + "'");
    const Vector yp = chart.forward(xp), ym = chart.forward(xm);
    const double width = xp[i] - xm[i];
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double dy = chart.periodic[static_cast<std::size_t>(r)] ? angle_difference(yp[r], ym[r])
                                                                   : yp[r] - ym[r];
      jac(r, i) = dy / width;
    }
  }
  return jac;
}

Matrix jacobian(const Chart& chart, const Vector& x, DiffScheme scheme) {
  if (scheme == DiffScheme::CentralDifference) return jacobian(chart, x);
  if (!chart.in_domain(x)) throw Error(Errc::DomainViolation, "probe point outside chart '" + chart.name + "'");
  return dual_jacobian(chart, x);
}

SymplecticReport certify_symplectic(const Chart& chart, const Vector& x, double tol, DiffScheme scheme) {
  validate_chart(chart);
  SymplecticReport rep;
  rep.point = x;
  rep.tol = tol;
  rep.scheme = scheme;
  if (scheme == DiffScheme::CentralDifference) rep.steps = fd_steps(x);
  const Matrix J = jacobian(chart, x, scheme);
  const Matrix omega = canonical_matrix(chart.dim / 2);
  rep.bracket_matrix = J * omega * J.transpose();
  rep.expected = pairing_matrix(chart.pairing, chart.dim);
  rep.max_defect = (rep.bracket_matrix - rep.expected).cwiseAbs().maxCoeff();
  rep.pass = rep.max_defect < tol;
  return rep;
}

Observable chart_component(const Chart& chart, std::size_t index) {
  if (index >= chart.dim) throw Error(Errc::InvalidState, "component index out of range");
  const auto k = static_cast<Eigen::Index>(index);
  return {[f = chart.forward, k](const Vector& x) { return f(x)[k]; }, chart.periodic[index]};
}

Vector gradient(const Observable& f, const Vector& x) {
  require_finite(x, "gradient probe point");
  const Vector h = fd_steps(x);
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h[i];
    xm[i] -= h[i];
    const double fp = f.fn(xp), fm = f.fn(xm);
    g[i] = (f.periodic ? angle_difference(fp, fm) : fp - fm) / (xp[i] - xm[i]);
  }
  return g;
}

double bracket(const Observable& f, const Observable& g, const Vector& x) {
  if (x.size() % 2 != 0) throw Error(Errc::DimensionMismatch, "bracket needs an even-dimensional point");
  const Vector gf = gradient(f, x);
  const Vector gg = gradient(g, x);
  const Eigen::Index n = x.size() / 2;
  // sum_i df/dP_i dg/dQ_i - df/dQ_i dg/dP_i
  return gf.head(n).dot(gg.tail(n)) - gf.tail(n).dot(gg.head(n));
}

RestrictedForm restricted_form(const Matrix& constraint_gradients, double rank_tol) {
  const Eigen::Index dim = constraint_gradients.cols();
  if (dim % 2 != 0) throw Error(Errc::DimensionMismatch, "restricted form needs an even dimension");
  Eigen::JacobiSVD<Matrix> svd_a(constraint_gradients, Eigen::ComputeFullV);
  const auto& sa = svd_a.singularValues();
  const double scale = sa.size() ? sa[0] : 0.0;
  Eigen::Index rank_a = 0;
  for (Eigen::Index i = 0; i < sa.size(); ++i)
    if (sa[i] > 1e-12 * std::max(scale, 1.0)) ++rank_a;
  if (rank_a != constraint_gradients.rows())
    throw Error(Errc::InvalidState, "constraint differentials are not independent");
  const Matrix basis = svd_a.matrixV().rightCols(dim - rank_a);  // orthonormal kernel basis
  const Matrix w = basis.transpose() * canonical_matrix(static_cast<std::size_t>(dim / 2)) * basis;
  Eigen::JacobiSVD<Matrix> svd_w(w);
  const auto& sw = svd_w.singularValues();
  RestrictedForm out;
  out.tangent_dim = static_cast<std::size_t>(basis.cols());
  for (Eigen::Index i = 0; i < sw.size(); ++i)
    if (sw[i] > rank_tol) ++out.rank;
  out.min_singular = sw.size() ? sw[sw.size() - 1] : 0.0;
  return out;
}

Matrix direction_constraint_gradients(const JacobiState& j, const Vec3& direction) {
  const double dn = norm(direction);
  if (!(dn > 0.0)) throw Error(Errc::InvalidState, "direction must be nonzero");
  const Vec3 d = direction / dn;
  // e1, e2 complete d to an orthonormal frame.
  const Vec3 trial = std::abs(d.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const Vec3 e1 = normalized(cross(d, trial));
  const Vec3 e2 = cross(d, e1);
  const auto n = static_cast<Eigen::Index>(j.pairs.size());
  Matrix a = Matrix::Zero(2, 6 * n);
  const Vec3 axes[2] = {e1, e2};
  for (Eigen::Index r = 0; r < 2; ++r) {
    const Vec3& e = axes[r];
    for (Eigen::Index i = 0; i < n; ++i) {
      const JacobiPair& pr = j.pairs[static_cast<std::size_t>(i)];
      // e . (Q x P) = P . (e x Q) = Q . (P x e)
      const Vec3 dP = cross(e, pr.Q), dQ = cross(pr.P, e);
      a.block<1, 3>(r, 3 * i) << dP.x, dP.y, dP.z;
      a.block<1, 3>(r, 3 * n + 3 * i) << dQ.x, dQ.y, dQ.z;
    }
  }
  return a;
}

namespace {

CrossSectionReport summarize(std::vector<RestrictedForm> forms, double tol) {
  CrossSectionReport rep;
  rep.points = forms.size();
  rep.pass = !forms.empty();
  rep.min_singular = std::numeric_limits<double>::infinity();
  rep.min_rank = std::numeric_limits<std::size_t>::max();
  for (const RestrictedForm& f : forms) {
    rep.tangent_dim = f.tangent_dim;
    rep.min_rank = std::min(rep.min_rank, f.rank);
    rep.min_singular = std::min(rep.min_singular, f.min_singular);
    rep.pass = rep.pass && f.rank == f.tangent_dim && f.min_singular > tol;
  }
  if (forms.empty()) {
    rep.min_singular = 0.0;
    rep.min_rank = 0;
  }
  rep.per_point = std::move(forms);
  return rep;
}

}  // namespace

CrossSectionReport check_cross_section(std::span<const JacobiState> points, const Vec3& direction,
                                       double tol) {
  if (!is_finite(direction) || !(norm(direction) > 0.0))
    throw Error(Errc::InvalidState, "direction must be finite and nonzero");
  const Vec3 d = normalized(direction);
  std::vector<RestrictedForm> forms;
  for (const JacobiState& j : points) {
    Vec3 C;
    for (const JacobiPair& pr : j.pairs) C += cross(pr.Q, pr.P);
    const double cn = norm(C);
    if (!(cn > 0.0)) throw Error(Errc::ZeroAngularMomentum, "cross-section point has C = 0");
    if (norm(cross(C, d)) > 1e-9 * cn || dot(C, d) <= 0.0)
      throw Error(Errc::InvalidState, "cross-section point is not on the fixed-direction submanifold");
    forms.push_back(restricted_form(direction_constraint_gradients(j, d), tol));
  }
  return summarize(std::move(forms), tol);
}

CrossSectionReport check_coordinate_section(std::span<const JacobiState> points,
                                            std::span<const std::size_t> fixed_indices, double tol) {
  std::vector<RestrictedForm> forms;
  for (const JacobiState& j : points) {
    const auto dim = static_cast<Eigen::Index>(6 * j.pairs.size());
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(fixed_indices.size()), dim);
    for (std::size_t r = 0; r < fixed_indices.size(); ++r) {
      if (static_cast<Eigen::Index>(fixed_indices[r]) >= dim)
        throw Error(Errc::InvalidState, "fixed coordinate index out of range");
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(fixed_indices[r])) = 1.0;
    }
    forms.push_back(restricted_form(a, tol));
  }
  return summarize(std::move(forms), tol);
}

DFactor measure_d_factor(const Chart& chart, const Vector& x, DiffScheme scheme) {
  if (!chart.moment_pair) throw Error(Errc::InvalidState, "chart '" + chart.name + "' declares no moment pair");
  const SymplecticReport rep = certify_symplectic(chart, x, kCertifyTol, scheme);
  const auto [action, angle] = chart.pairing[*chart.moment_pair];
  DFactor out;
  out.bracket = rep.bracket_matrix(static_cast<Eigen::Index>(action), static_cast<Eigen::Index>(angle));
  out.D = 1.0 / out.bracket;
  out.max_defect = rep.max_defect;
  return out;
}

SweepResult certify_sweep(const std::function<ChartSample(std::size_t)>& sampler, std::size_t points,
                          double tol, unsigned threads) {
  SweepResult result;
  result.entries.resize(points);
  auto run = [&](std::size_t index) {
    const ChartSample s = sampler(index);
    SweepEntry& e = result.entries[index];
    e.index = index;
    e.report = certify_symplectic(s.chart, s.point, tol);
    if (s.chart.moment_pair) {
      const auto [action, angle] = s.chart.pairing[*s.chart.moment_pair];
      DFactor d;
      d.bracket = e.report.bracket_matrix(static_cast<Eigen::Index>(action), static_cast<Eigen::Index>(angle));
      d.D = 1.0 / d.bracket;
      d.max_defect = e.report.max_defect;
      e.d_factor = d;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(points, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < points; ++i) run(i);
  } else {
    std::vector<std::exception_ptr> failures(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < points; i += threads) run(i);
        } catch (...) {
          failures[t] = std::current_exception();
        }
      });
    for (std::thread& th : pool) th.join();
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);
  }
  result.all_pass = true;
  for (const SweepEntry& e : result.entries) {
    result.worst_defect = std::max(result.worst_defect, e.report.max_defect);
    result.all_pass = result.all_pass && e.report.pass;
  }
  return result;
}

std::string machine_line(const SymplecticReport& report, std::uint64_t seed) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "defect=%.6e pass=%d seed=%llu", report.max_defect, report.pass ? 1 : 0,
                static_cast<unsigned long long>(seed));
  return buf;
}

std::string format_bracket_table(const SymplecticReport& report) {
  std::ostringstream out;
  const Matrix& b = report.bracket_matrix;
  char buf[32];
  for (Eigen::Index r = 0; r < b.rows(); ++r) {
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      // Clean near-zero entries so the table is stable in the last digits.
      const double v = std::abs(b(r, c)) < 1e-9 ? 0.0 : b(r, c);
      std::snprintf(buf, sizeof buf, "%10.6f", v);
      out << buf << (c + 1 == b.cols() ? '\n' : ' ');
    }
  }
  return out.str();
}

}  // namespace cmech
