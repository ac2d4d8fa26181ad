#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cmech/sampling.hpp"
#include "cmech/symcheck.hpp"

namespace cmech {

/// A named family of charts together with a sampler of nondegenerate
/// points. Masses (or mu, M) are drawn per point, so every sample carries
/// its own chart instance.
struct ChartFamily {
  std::string name;
  std::string description;
  /// false for the built-in negative controls
  bool canonical = true;
  std::function<ChartSample(Rng&)> draw;
};

/// jacobi3, jacobi4, delaunay-planar, delaunay, deprit3, deprit4, plus the
/// negative controls scaled-bad and deprit3-rescaled.
const std::vector<ChartFamily>& chart_families();

/// nullptr when the name is unknown.
const ChartFamily* find_family(std::string_view name);

/// Sample number `index` of the sweep seeded by `seed`.
ChartSample draw_sample(const ChartFamily& family, std::uint64_t seed, std::size_t index);

}  // namespace cmech
