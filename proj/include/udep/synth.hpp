#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "udep/errors.hpp"

namespace udep::synth {

// mplus: x and y share the confounder a (marginally dependent,
// conditionally independent given z = a). mminus: x and y are driven by
// separate uniforms b, c (marginally independent) and z = b - c couples
// them conditionally.
enum class Model { mplus, mminus };

struct ModelConfig {
  Model model = Model::mplus;
  double gamma_db = 10.0;  // signal-to-noise ratio, decibels
  int L = 100;
};

// Three aligned scalar sample arrays of common length L.
struct Dataset {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;

  int size() const { return static_cast<int>(x.size()); }
};

double db_to_linear(double gamma_db);

// L i.i.d. triplets, deterministic given (cfg, seed). Per sample the
// generator consumes a fixed draw sequence from one xoshiro256++ stream
// seeded with `seed`: uniform amplitude(s), the two sign flips p and q,
// then one Box-Muller pair for the noises v and w.
Dataset generate(const ModelConfig& cfg, std::uint64_t seed);

// CSV with header "x,y,z", one row per sample, 17 significant digits
// (full double round-trip precision).
void write_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_csv(const std::filesystem::path& path);

}  // namespace udep::synth
