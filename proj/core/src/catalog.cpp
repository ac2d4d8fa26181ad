#include "cmech/catalog.hpp"

#include "cmech/deprit.hpp"
#include "cmech/jacobi.hpp"
#include "cmech/kepler.hpp"

namespace cmech {
namespace {

ChartSample jacobi_sample(Rng& rng, std::size_t bodies) {
  PhaseState s = sample_phase_state(rng, bodies);
  // Give the anchor pair a generic value as well.
  const Vec3 shift{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  const Vec3 kick{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
  double total = 0.0;
  for (double m : s.masses) total += m;
  for (std::size_t j = 0; j < s.size(); ++j) {
    s.bodies[j].q += shift;
    s.bodies[j].p += kick * (s.masses[j] / total);
  }
  return {jacobi_chart(s.masses), flatten(s)};
}

ChartSample delaunay_sample(Rng& rng) {
  const double mu = rng.uniform(0.5, 2.0), M = rng.uniform(0.5, 2.0);
  const KeplerState k = elements_to_cartesian(sample_elements(rng, 1.0, 2.0), mu, M);
  Vector x(6);
  x << k.P.x, k.P.y, k.P.z, k.Q.x, k.Q.y, k.Q.z;
  return {delaunay_chart(mu, M), x};
}

ChartSample planar_delaunay_sample(Rng& rng) {
  const double mu = rng.uniform(0.5, 2.0), M = rng.uniform(0.5, 2.0);
  const KeplerState k = elements_to_cartesian(sample_planar_elements(rng, 1.0, 2.0), mu, M);
  Vector x(4);
  x << k.P.x, k.P.y, k.Q.x, k.Q.y;
  return {planar_delaunay_chart(mu, M), x};
}

ChartSample deprit_sample(Rng& rng, std::size_t bodies) {
  const JacobiState j = sample_jacobi_state(rng, bodies);
  return {deprit_chart(j.masses), reduced_vector(j)};
}

std::vector<ChartFamily> build_families() {
  std::vector<ChartFamily> f;
  f.push_back({"jacobi3", "Cartesian -> Jacobi, three bodies (18 dof incl. anchor)", true,
               [](Rng& r) { return jacobi_sample(r, 3); }});
  f.push_back({"jacobi4", "Cartesian -> Jacobi, four bodies", true, [](Rng& r) { return jacobi_sample(r, 4); }});
  f.push_back({"delaunay-planar", "(Px,Py,Qx,Qy) -> (L,G,l,g)", true, planar_delaunay_sample});
  f.push_back({"delaunay", "(P,Q) -> (L,G,H,l,g,h)", true, delaunay_sample});
  f.push_back({"deprit3", "reduced Jacobi -> Deprit, three bodies", true, [](Rng& r) { return deprit_sample(r, 3); }});
  f.push_back({"deprit4", "reduced Jacobi -> Deprit, four bodies", true, [](Rng& r) { return deprit_sample(r, 4); }});
  f.push_back({"scaled-bad", "(P,Q) -> (2P,2Q)", false, [](Rng& r) {
                 Vector x(6);
                 for (Eigen::Index i = 0; i < 6; ++i) x[i] = r.uniform(-1, 1);
                 return ChartSample{scaling_chart(6, 2.0), x};
               }});
  f.push_back({"deprit3-rescaled", "deprit3 with Phi2 doubled", false, [](Rng& r) {
                 ChartSample s = deprit_sample(r, 3);
                 s.chart = rescale_action(s.chart, *s.chart.moment_pair, 2.0);
                 return s;
               }});
  return f;
}

}  // namespace

const std::vector<ChartFamily>& chart_families() {
  static const std::vector<ChartFamily> families = build_families();
  return families;
}

const ChartFamily* find_family(std::string_view name) {
  for (const ChartFamily& f : chart_families())
    if (f.name == name) return &f;
  return nullptr;
}

ChartSample draw_sample(const ChartFamily& family, std::uint64_t seed, std::size_t index) {
  Rng rng = Rng::for_index(seed, index);
  return family.draw(rng);
}

}  // namespace cmech
