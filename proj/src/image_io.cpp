#include "anisoflow/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace anisoflow {

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  std::string tail = s.substr(s.size() - suffix.size());
  std::transform(tail.begin(), tail.end(), tail.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return tail == suffix;
}

// next whitespace-separated token, skipping '#' comments
std::string next_token(std::istream& in) {
  std::string tok;
  while (in) {
    const int c = in.peek();
    if (c == EOF) break;
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    in >> tok;
    return tok;
  }
  return tok;
}

ScalarField from_pixels(const std::vector<double>& pixels, int w, int h,
                        const std::string& path) {
  if (w < 3 || h < 3) {
    throw UnsupportedFormat(path + ": image must be at least 3x3 (boundary ring is dropped)");
  }
  const Grid g{w - 2, h - 2, 1.0, 1.0};
  ScalarField f = ScalarField::zero(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      f.v(i, j) = pixels[static_cast<std::size_t>(j + 1) * w + (i + 1)];
    }
  }
  return f;
}

ScalarField load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnreadableFile(path + ": cannot open file");
  std::string magic = next_token(in);
  const bool ascii = magic == "P2";
  if (!ascii && magic != "P5") {
    throw UnsupportedFormat(path + ": expected PGM magic P2 or P5, got '" + magic + "'");
  }
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(next_token(in));
    h = std::stoi(next_token(in));
    maxval = std::stoi(next_token(in));
  } catch (const std::exception&) {
    throw UnsupportedFormat(path + ": malformed PGM header");
  }
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) {
    throw UnsupportedFormat(path + ": invalid PGM dimensions or maxval");
  }
  std::vector<double> pixels(static_cast<std::size_t>(w) * h);
  if (ascii) {
    for (auto& px : pixels) {
      const std::string tok = next_token(in);
      if (tok.empty()) throw UnsupportedFormat(path + ": truncated PGM data");
      px = std::stod(tok) / maxval;
    }
  } else {
    if (maxval > 255) throw UnsupportedFormat(path + ": only 8-bit binary PGM is supported");
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> raw(pixels.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
      throw UnsupportedFormat(path + ": truncated PGM data");
    }
    for (std::size_t k = 0; k < raw.size(); ++k) pixels[k] = raw[k] / double(maxval);
  }
  return from_pixels(pixels, w, h, path);
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

ScalarField load_png(const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw UnreadableFile(path + ": cannot open file");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw UnsupportedFormat(path + ": not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw UnreadableFile(path + ": libpng initialization failed");
  }
  std::vector<std::vector<png_byte>> rows;
  int w = 0, h = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw UnsupportedFormat(path + ": libpng failed to decode the image");
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_GRAY || depth > 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw UnsupportedFormat(path + ": only 8-bit grayscale PNG is supported");
  }
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);
  w = static_cast<int>(png_get_image_width(png, info));
  h = static_cast<int>(png_get_image_height(png, info));
  rows.assign(h, std::vector<png_byte>(png_get_rowbytes(png, info)));
  std::vector<png_bytep> row_ptrs(h);
  for (int r = 0; r < h; ++r) row_ptrs[r] = rows[r].data();
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> pixels(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) pixels[static_cast<std::size_t>(r) * w + c] = rows[r][c] / 255.0;
  }
  return from_pixels(pixels, w, h, path);
}

std::vector<unsigned char> quantize_with_ring(const ScalarField& f, int& w, int& h) {
  w = f.grid.nx + 2;
  h = f.grid.ny + 2;
  std::vector<unsigned char> pixels(static_cast<std::size_t>(w) * h, 0);
  for (int j = 0; j < f.grid.ny; ++j) {
    for (int i = 0; i < f.grid.nx; ++i) {
      const double v = std::clamp(f.v(i, j), 0.0, 1.0);
      pixels[static_cast<std::size_t>(j + 1) * w + (i + 1)] =
          static_cast<unsigned char>(std::lround(v * 255.0));
    }
  }
  return pixels;
}

void save_pgm(const ScalarField& f, const std::string& path) {
  int w = 0, h = 0;
  const std::vector<unsigned char> pixels = quantize_with_ring(f, w, h);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UnwritablePath(path + ": cannot open for writing");
  out << "P5\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw UnwritablePath(path + ": write failed");
}

void save_png(const ScalarField& f, const std::string& path) {
  int w = 0, h = 0;
  std::vector<unsigned char> pixels = quantize_with_ring(f, w, h);
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw UnwritablePath(path + ": cannot open for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw UnwritablePath(path + ": libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw UnwritablePath(path + ": libpng failed to encode the image");
  }
  png_init_io(png, fp.get());
  png_set_compression_level(png, 6);  // fixed level keeps the bytes deterministic
  png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> row_ptrs(h);
  for (int r = 0; r < h; ++r) row_ptrs[r] = pixels.data() + static_cast<std::size_t>(r) * w;
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

ScalarField load_image(const std::string& path) {
  if (has_suffix(path, ".png")) return load_png(path);
  return load_pgm(path);
}

void save_image(const ScalarField& field, const std::string& path) {
  if (has_suffix(path, ".png")) {
    save_png(field, path);
  } else {
    save_pgm(field, path);
  }
}

}  // namespace anisoflow
