#pragma once
// Output helpers: CSV tables, PGM/PPM rasters, JSON-lines run records and
// a small key = value configuration format.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace eddy::io {

namespace fs = std::filesystem;

// Output root: $EDDY_OUTPUT_ROOT if set, otherwise ./out
inline fs::path output_root() {
  const char* env = std::getenv("EDDY_OUTPUT_ROOT");
  fs::path p = env && *env ? fs::path(env) : fs::path("out");
  fs::create_directories(p);
  return p;
}

inline fs::path output_dir(const std::string& sub) {
  fs::path p = output_root() / sub;
  fs::create_directories(p);
  return p;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    out_.precision(17);
    row(header);
  }
  template <class... T>
  void write(const T&... v) {
    bool first = true;
    ((out_ << (first ? "" : ",") << v, first = false), ...);
    out_ << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

// 8-bit greyscale raster; values mapped linearly from [lo, hi], NaN -> 0.
inline void write_pgm(const fs::path& path, const std::vector<double>& v, int nx, int ny, double lo, double hi) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << "P5\n" << nx << " " << ny << "\n255\n";
  for (int j = ny - 1; j >= 0; --j) // top row = largest z
    for (int i = 0; i < nx; ++i) {
      double x = v[std::size_t(j) * nx + i];
      unsigned char c = 0;
      if (std::isfinite(x)) c = (unsigned char)std::clamp(255.0 * (x - lo) / (hi - lo), 0.0, 255.0);
      f.put(char(c));
    }
}

// Colour raster with a blue-white-red ramp; NaN -> black.
inline void write_ppm(const fs::path& path, const std::vector<double>& v, int nx, int ny, double lo, double hi) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << "P6\n" << nx << " " << ny << "\n255\n";
  for (int j = ny - 1; j >= 0; --j)
    for (int i = 0; i < nx; ++i) {
      double x = v[std::size_t(j) * nx + i];
      unsigned char rgb[3] = {0, 0, 0};
      if (std::isfinite(x)) {
        double t = std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
        double r = t < 0.5 ? 2.0 * t : 1.0, b = t < 0.5 ? 1.0 : 2.0 * (1.0 - t), g = 1.0 - std::abs(2.0 * t - 1.0);
        rgb[0] = (unsigned char)(255.0 * r);
        rgb[1] = (unsigned char)(255.0 * g);
        rgb[2] = (unsigned char)(255.0 * b);
      }
      f.write(reinterpret_cast<const char*>(rgb), 3);
    }
}

// Append-only JSON-lines log
inline void append_record(const fs::path& path, const nlohmann::json& rec) {
  std::ofstream f(path, std::ios::app);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << rec.dump() << '\n';
}

// key = value lines, '#' comments
class Config {
 public:
  Config() = default;
  static Config load(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config " + path.string());
    Config c;
    std::string line;
    int n = 0;
    while (std::getline(f, line)) {
      ++n;
      auto h = line.find('#');
      if (h != std::string::npos) line.erase(h);
      auto eq = line.find('=');
      if (trim(line).empty()) continue;
      if (eq == std::string::npos) throw std::runtime_error(path.string() + ":" + std::to_string(n) + ": expected key = value");
      c.kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return c;
  }
  bool has(const std::string& k) const { return kv_.count(k) > 0; }
  std::string get(const std::string& k, const std::string& def) const {
    auto it = kv_.find(k);
    return it == kv_.end() ? def : it->second;
  }
  double get(const std::string& k, double def) const {
    auto it = kv_.find(k);
    return it == kv_.end() ? def : std::stod(it->second);
  }
  int get(const std::string& k, int def) const {
    auto it = kv_.find(k);
    return it == kv_.end() ? def : std::stoi(it->second);
  }
  void set(const std::string& k, const std::string& v) { kv_[k] = v; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  static std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }
  std::map<std::string, std::string> kv_;
};

} // namespace eddy::io
