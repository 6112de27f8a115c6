#pragma once

// Shared fixtures: the 64-cell deflector benchmark device and randomized
// lossless stacks.

#include <random>

#include "rcwa/geometry.hpp"
#include "rcwa/kspace.hpp"
#include "rcwa/optimize.hpp"

namespace testutil {

using namespace rcwa;

// Deterministic binary silicon/air pattern standing in for "the benchmark
// device": one period of a 1-D deflector grating.
inline VecR benchmark_binary_pattern(int cells = 64, std::uint64_t seed = 42,
                                     double n_ridge = 3.48, double n_groove = 1.0) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  VecR pattern(cells);
  for (int i = 0; i < cells; ++i) pattern[i] = coin(rng) ? n_ridge : n_groove;
  return pattern;
}

inline DeflectorSetup benchmark_deflector(int fto = 40, int cells = 64) {
  DeflectorSetup setup;
  setup.wavelength = 900.0;
  setup.deflection_deg = 50.0;
  setup.thickness = 325.0;
  setup.n_inc = 1.45;
  setup.n_sub = 1.0;
  setup.cells = cells;
  setup.fto = fto;
  return setup;
}

// Single-layer raster geometry from an index pattern.
inline Geometry pattern_geometry(const VecR& index_pattern) {
  MatC row(1, index_pattern.size());
  for (Eigen::Index i = 0; i < index_pattern.size(); ++i) {
    const double n = index_pattern[i];
    row(0, i) = cd(n * n, 0.0);
  }
  return new_raster({row});
}

struct RandomCase {
  Geometry geometry;
  SimConfig config;
};

// Random lossless multilayer (binary raster patterns, mixed 1-D/2-D).
inline RandomCase random_lossless_stack(std::mt19937_64& rng, bool allow_2d = true,
                                        double max_k0qd = 0.0) {
  std::uniform_int_distribution<int> layer_count(1, 4);
  std::uniform_real_distribution<double> index(1.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  const bool two_d = allow_2d && coin(rng);
  const int layers = layer_count(rng);
  const int px = two_d ? 6 : 16;
  const int py = two_d ? 6 : 1;

  SimConfig config;
  config.wavelength = 1.0;
  config.period_x = 0.6 + 1.8 * unit(rng);
  config.period_y = two_d ? 0.6 + 1.8 * unit(rng) : config.period_x;
  config.theta = unit(rng) * pi / 3.0;
  config.phi = two_d ? unit(rng) * 2.0 * pi : 0.0;
  config.psi = unit(rng) * pi / 2.0;
  config.n_inc = 1.0 + unit(rng);
  config.n_sub = 1.0 + unit(rng);
  config.order_x = two_d ? 3 : 10;
  config.order_y = two_d ? 3 : 0;

  const double n_hi = index(rng);
  const double n_lo = 1.0;
  // Cap thickness so exp(-k0*q*d) stays comfortably invertible when asked.
  double d_max = 0.6;
  if (max_k0qd > 0.0) {
    const double q_max = std::sqrt(n_hi * n_hi + 9.0);
    d_max = max_k0qd / (2.0 * pi * q_max);
  }

  UCell cell;
  for (int g = 0; g < layers; ++g) {
    MatC grid(py, px);
    for (int r = 0; r < py; ++r)
      for (int c = 0; c < px; ++c) {
        const double n = coin(rng) ? n_hi : n_lo;
        grid(r, c) = cd(n * n, 0.0);
      }
    cell.layers.push_back(grid);
    config.thickness.push_back(0.02 + (d_max - 0.02) * unit(rng));
  }
  return {Geometry{new_raster(cell.layers)}, config};
}

} // namespace testutil
