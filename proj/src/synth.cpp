#include "anisoflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace anisoflow {

namespace {

double uniform01(std::mt19937_64& rng) { return ((rng() >> 11) + 0.5) * 0x1p-53; }

// Box-Muller; avoids the implementation-defined std::normal_distribution so
// outputs are bit-identical across standard libraries
double gaussian(std::mt19937_64& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

ScalarField synth_pattern(const SyntheticSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1) throw std::invalid_argument("synth: size must be positive");
  if (spec.sigma < 0.0) throw std::invalid_argument("synth: sigma must be >= 0");
  const Grid g{spec.nx, spec.ny, 1.0, 1.0};
  ScalarField f = ScalarField::zero(g);

  for (const RectSpec& r : spec.rects) {
    const double c = std::cos(r.angle);
    const double s = std::sin(r.angle);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const double dx = i - r.cx;
        const double dy = j - r.cy;
        // rotate the node into the rectangle frame
        const double bx = c * dx + s * dy;
        const double by = -s * dx + c * dy;
        if (std::abs(bx) <= 0.5 * r.width && std::abs(by) <= 0.5 * r.height) {
          f.v(i, j) = r.intensity;
        }
      }
    }
  }

  if (spec.sigma > 0.0) {
    std::mt19937_64 rng(spec.seed);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        f.v(i, j) = std::clamp(f.v(i, j) + spec.sigma * gaussian(rng), 0.0, 1.0);
      }
    }
  } else {
    f.v = f.v.min(1.0).max(0.0);
  }
  return f;
}

}  // namespace anisoflow
