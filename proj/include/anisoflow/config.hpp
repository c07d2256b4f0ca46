#pragma once

#include "anisoflow/anisotropy.hpp"
#include "anisoflow/energy.hpp"
#include "anisoflow/synth.hpp"

#include <optional>
#include <string>

namespace anisoflow {

/// A full run description. Exactly one of `image` / `synthetic` must be
/// present. Serializes to a flat `key = value` text file;
/// parse(serialize(c)) == c.
struct RunConfig {
  std::optional<std::string> image;
  std::optional<SyntheticSpec> synthetic;
  std::string anisotropy = "l1";  // l1 | euclidean | kgon:<k>
  SchemeParams params;
  int steps = 50;
  std::string outdir = "out";
  int stride = 10;  // snapshot every this many steps
  std::uint64_t seed = 0;
  double c_hyp = 1.0;   // embedding-constant hypothesis for tau_star
  double c_star = 1.0;  // rate-constant hypothesis for the dependence check

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& config);
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

/// The fixed input u_org described by the config (loaded image or synthetic
/// pattern).
ScalarField build_input(const RunConfig& config);

Anisotropy build_anisotropy(const RunConfig& config);

}  // namespace anisoflow
