#include "anisoflow/config.hpp"

#include "anisoflow/image_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace anisoflow {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

std::string rects_to_string(const std::vector<RectSpec>& rects) {
  std::string out;
  for (std::size_t k = 0; k < rects.size(); ++k) {
    const RectSpec& r = rects[k];
    if (k > 0) out += "; ";
    out += fmt(r.cx) + "," + fmt(r.cy) + "," + fmt(r.width) + "," + fmt(r.height) + "," +
           fmt(r.angle) + "," + fmt(r.intensity);
  }
  return out;
}

std::vector<RectSpec> rects_from_string(const std::string& s) {
  std::vector<RectSpec> rects;
  for (const std::string& item : split(s, ';')) {
    if (item.empty()) continue;
    const std::vector<std::string> f = split(item, ',');
    if (f.size() != 6) {
      throw std::invalid_argument("config: rectangle needs cx,cy,width,height,angle,intensity");
    }
    rects.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3]),
                     std::stod(f[4]), std::stod(f[5])});
  }
  return rects;
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  if (image.has_value() == synthetic.has_value()) {
    throw std::invalid_argument("config: exactly one of image / synthetic input is required");
  }
  if (synthetic) {
    if (synthetic->nx < 1 || synthetic->ny < 1) {
      throw std::invalid_argument("config: synthetic size must be positive");
    }
    if (synthetic->sigma < 0.0) throw std::invalid_argument("config: noise_sigma must be >= 0");
  }
  if (steps < 0) throw std::invalid_argument("config: steps must be >= 0");
  if (stride < 1) throw std::invalid_argument("config: stride must be >= 1");
  if (!(c_hyp > 0.0) || !(c_star > 0.0)) {
    throw std::invalid_argument("config: c_hyp and c_star must be > 0");
  }
  build_anisotropy(*this);  // rejects bad kind / eps combinations
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  SyntheticSpec synth;
  bool has_synth = false;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    try {
      if (key == "image") c.image = val;
      else if (key == "synth_nx") { synth.nx = std::stoi(val); has_synth = true; }
      else if (key == "synth_ny") { synth.ny = std::stoi(val); has_synth = true; }
      else if (key == "synth_rects") { synth.rects = rects_from_string(val); has_synth = true; }
      else if (key == "noise_sigma") { synth.sigma = std::stod(val); has_synth = true; }
      else if (key == "seed") c.seed = std::stoull(val);
      else if (key == "anisotropy") c.anisotropy = val;
      else if (key == "eps") c.params.eps = std::stod(val);
      else if (key == "kappa") c.params.kappa = std::stod(val);
      else if (key == "mu") c.params.mu = std::stod(val);
      else if (key == "nu") c.params.nu = std::stod(val);
      else if (key == "lambda") c.params.lambda = std::stod(val);
      else if (key == "p") c.params.p = std::stod(val);
      else if (key == "tau") c.params.tau = std::stod(val);
      else if (key == "tol_linear") c.params.tol_linear = std::stod(val);
      else if (key == "tol_convex") c.params.tol_convex = std::stod(val);
      else if (key == "max_iters") c.params.max_iters = std::stoi(val);
      else if (key == "steps") c.steps = std::stoi(val);
      else if (key == "outdir") c.outdir = val;
      else if (key == "stride") c.stride = std::stoi(val);
      else if (key == "c_hyp") c.c_hyp = std::stod(val);
      else if (key == "c_star") c.c_star = std::stod(val);
      else throw std::invalid_argument("unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (has_synth) {
    synth.seed = c.seed;
    c.synthetic = synth;
  }
  return c;
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  if (c.image) out += "image = " + *c.image + "\n";
  if (c.synthetic) {
    out += "synth_nx = " + std::to_string(c.synthetic->nx) + "\n";
    out += "synth_ny = " + std::to_string(c.synthetic->ny) + "\n";
    if (!c.synthetic->rects.empty()) {
      out += "synth_rects = " + rects_to_string(c.synthetic->rects) + "\n";
    }
    out += "noise_sigma = " + fmt(c.synthetic->sigma) + "\n";
  }
  out += "seed = " + std::to_string(c.seed) + "\n";
  out += "anisotropy = " + c.anisotropy + "\n";
  out += "eps = " + fmt(c.params.eps) + "\n";
  out += "kappa = " + fmt(c.params.kappa) + "\n";
  out += "mu = " + fmt(c.params.mu) + "\n";
  out += "nu = " + fmt(c.params.nu) + "\n";
  out += "lambda = " + fmt(c.params.lambda) + "\n";
  out += "p = " + fmt(c.params.p) + "\n";
  out += "tau = " + fmt(c.params.tau) + "\n";
  out += "tol_linear = " + fmt(c.params.tol_linear) + "\n";
  out += "tol_convex = " + fmt(c.params.tol_convex) + "\n";
  out += "max_iters = " + std::to_string(c.params.max_iters) + "\n";
  out += "steps = " + std::to_string(c.steps) + "\n";
  out += "outdir = " + c.outdir + "\n";
  out += "stride = " + std::to_string(c.stride) + "\n";
  out += "c_hyp = " + fmt(c.c_hyp) + "\n";
  out += "c_star = " + fmt(c.c_star) + "\n";
  return out;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UnreadableFile(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void save_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UnwritablePath(path + ": cannot open for writing");
  out << serialize_config(config);
}

ScalarField build_input(const RunConfig& config) {
  if (config.image) return load_image(*config.image);
  if (config.synthetic) return synth_pattern(*config.synthetic);
  throw std::invalid_argument("config: no input specified");
}

Anisotropy build_anisotropy(const RunConfig& config) {
  return make_anisotropy(config.anisotropy, config.params.eps);
}

}  // namespace anisoflow
