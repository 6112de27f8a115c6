#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcwa/fourier.hpp"
#include "rcwa/geometry.hpp"
#include "rcwa/kspace.hpp"
#include "rcwa/optimize.hpp"

namespace rcwa {

FourierMode fourier_mode_from_name(const std::string& name);
std::string fourier_mode_name(FourierMode mode);

struct SweepBlock {
  std::vector<int> fto;                  // ascending truncation orders
  std::vector<FourierMode> modes;        // defaults to the run's mode
  int deflection_order = 1;              // transmitted order with kx = t*lambda/px
};

struct OptimizeBlock {
  int cells = 64;
  int epochs = 100;
  OptAlgo optimizer = OptAlgo::Adam;
  double lr = 0.5;
  std::vector<std::uint64_t> seeds = {1};
  double deflection_deg = 50.0;
  double thickness = 325.0;
  double n_ridge = 3.48;
  double n_groove = 1.0;
};

struct FitOptimizer {
  OptAlgo algo = OptAlgo::Adam;
  double lr = 0.1;
};

struct FitBlock {
  std::vector<FitParam> params;
  double wavelength_min = 600.0;
  double wavelength_max = 900.0;
  int wavelength_count = 32;
  std::vector<FitOptimizer> optimizers;
  int iterations = 200;
  std::vector<std::uint64_t> seeds = {1};
  double period = 300.0;
  int order_x = 1;
  int order_y = 1;
};

// One run = one config file. Angles and refractive indices are converted at
// parse time; everything downstream consumes radians and permittivity.
struct RunConfig {
  SimConfig sim;
  std::optional<Geometry> geometry;
  FourierMode mode = FourierMode::CFS;
  std::string out_dir = "out";
  std::optional<std::array<int, 3>> field_res;
  std::optional<SweepBlock> sweep;
  std::optional<OptimizeBlock> optimize;
  std::optional<FitBlock> fit;
  std::string source_text; // raw config body, hashed into run manifests
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& base_dir = ".");

// Canonical serialization; parse_config_text(serialize_config(c)) compares
// equal to c.
std::string serialize_config(const RunConfig& config);

bool operator==(const SimConfig& a, const SimConfig& b);
bool operator==(const Rectangle& a, const Rectangle& b);
bool operator==(const VectorLayer& a, const VectorLayer& b);
bool operator==(const VectorLayout& a, const VectorLayout& b);
bool operator==(const UCell& a, const UCell& b);
bool operator==(const SweepBlock& a, const SweepBlock& b);
bool operator==(const OptimizeBlock& a, const OptimizeBlock& b);
bool operator==(const FitOptimizer& a, const FitOptimizer& b);
bool operator==(const FitBlock& a, const FitBlock& b);
bool equivalent(const RunConfig& a, const RunConfig& b); // ignores source_text

} // namespace rcwa
