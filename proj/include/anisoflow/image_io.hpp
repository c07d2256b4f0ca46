#pragma once

#include "anisoflow/grid.hpp"

#include <stdexcept>
#include <string>

namespace anisoflow {

struct UnreadableFile : std::runtime_error {
  explicit UnreadableFile(const std::string& what) : std::runtime_error(what) {}
};
struct UnsupportedFormat : std::runtime_error {
  explicit UnsupportedFormat(const std::string& what) : std::runtime_error(what) {}
};
struct UnwritablePath : std::runtime_error {
  explicit UnwritablePath(const std::string& what) : std::runtime_error(what) {}
};

/// Reads a PGM (P2/P5) or 8-bit grayscale PNG image. Intensities are mapped
/// linearly to [0, 1]; the one-pixel boundary ring carries the zero Dirichlet
/// condition and is dropped, so a W x H image yields a (W-2) x (H-2) field
/// with unit spacing.
ScalarField load_image(const std::string& path);

/// Writes the field as an 8-bit grayscale image (PGM P5, or PNG when the
/// extension is .png), clipping to [0, 1] before quantization and restoring
/// the zero boundary ring, so load_image(save_image(f)) round-trips up to
/// 1/255 quantization. Output bytes are deterministic.
void save_image(const ScalarField& field, const std::string& path);

}  // namespace anisoflow
