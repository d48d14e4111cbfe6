#include "udep/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "udep/rng.hpp"

namespace udep::synth {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

void require_valid(const ModelConfig& cfg) {
  if (cfg.L < 2) throw ConfigError("model needs L >= 2");
  if (!std::isfinite(cfg.gamma_db)) throw ConfigError("gamma_db must be finite");
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_value(const std::string& field, const std::filesystem::path& path,
                   std::size_t line_no) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &pos);
  } catch (const std::exception&) {
    throw InvalidInput(path.string() + ":" + std::to_string(line_no) +
                       ": not a number: '" + field + "'");
  }
  if (pos != field.size()) {
    throw InvalidInput(path.string() + ":" + std::to_string(line_no) +
                       ": trailing characters in '" + field + "'");
  }
  if (!std::isfinite(v)) {
    throw InvalidInput(path.string() + ":" + std::to_string(line_no) +
                       ": non-finite value '" + field + "'");
  }
  return v;
}

}  // namespace

double db_to_linear(double gamma_db) { return std::pow(10.0, gamma_db / 10.0); }

Dataset generate(const ModelConfig& cfg, std::uint64_t seed) {
  require_valid(cfg);
  const double gamma = db_to_linear(cfg.gamma_db);
  const double amp = std::sqrt(gamma);

  rng::Xoshiro256pp gen(seed);
  Dataset data;
  const auto n = static_cast<std::size_t>(cfg.L);
  data.x.resize(n);
  data.y.resize(n);
  data.z.resize(n);

  for (std::size_t l = 0; l < n; ++l) {
    if (cfg.model == Model::mplus) {
      const double a = kSqrt3 * gen.uniform01();
      const double p = gen.sign();
      const double q = gen.sign();
      const auto [v, w] = gen.normal_pair();
      data.x[l] = amp * a * p + v;
      data.y[l] = amp * a * q + w;
      data.z[l] = a;
    } else {
      const double b = kSqrt3 * gen.uniform01();
      const double c = kSqrt3 * gen.uniform01();
      const double p = gen.sign();
      const double q = gen.sign();
      const auto [v, w] = gen.normal_pair();
      data.x[l] = amp * b * p + v;
      data.y[l] = amp * c * q + w;
      data.z[l] = b - c;
    }
  }
  return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "x,y,z\n";
  for (std::size_t l = 0; l < data.x.size(); ++l) {
    out << format_value(data.x[l]) << ',' << format_value(data.y[l]) << ','
        << format_value(data.z[l]) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw InvalidInput(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,z") {
    throw InvalidInput(path.string() + ": expected header 'x,y,z', got '" + line + "'");
  }

  Dataset data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::istringstream row(line);
    std::string fx, fy, fz, extra;
    if (!std::getline(row, fx, ',') || !std::getline(row, fy, ',') ||
        !std::getline(row, fz, ',')) {
      throw InvalidInput(path.string() + ":" + std::to_string(line_no) +
                         ": expected 3 comma-separated values");
    }
    if (std::getline(row, extra, ',')) {
      throw InvalidInput(path.string() + ":" + std::to_string(line_no) +
                         ": expected 3 values, found more");
    }
    data.x.push_back(parse_value(fx, path, line_no));
    data.y.push_back(parse_value(fy, path, line_no));
    data.z.push_back(parse_value(fz, path, line_no));
  }
  if (data.x.empty()) throw InvalidInput(path.string() + ": no data rows");
  return data;
}

}  // namespace udep::synth
