#pragma once

#include "anisoflow/grid.hpp"

#include <cstdint>
#include <vector>

namespace anisoflow {

/// Axis specification of one rotated rectangle, in node (pixel) units.
struct RectSpec {
  double cx = 0.0;
  double cy = 0.0;
  double width = 0.0;
  double height = 0.0;
  double angle = 0.0;      // radians, counterclockwise
  double intensity = 0.0;  // in [0, 1]

  bool operator==(const RectSpec&) const = default;
};

/// Test-pattern specification: rotated rectangles painted in order onto a
/// zero background, then additive Gaussian noise of amplitude sigma, then a
/// clip to [0, 1].
struct SyntheticSpec {
  int nx = 0;
  int ny = 0;
  std::vector<RectSpec> rects;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const SyntheticSpec&) const = default;
};

/// Deterministic given the seed (the Gaussian sampler is built in, not taken
/// from the standard library distributions).
ScalarField synth_pattern(const SyntheticSpec& spec);

}  // namespace anisoflow
