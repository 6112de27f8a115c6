#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rcwa/scattering.hpp"
#include "rcwa/types.hpp"

namespace rcwa {

enum class OptAlgo { Momentum, Adagrad, RMSProp, Adam, RAdam };

OptAlgo opt_algo_from_name(const std::string& name);
std::string opt_algo_name(OptAlgo algo);

// First-order optimizer with per-algorithm accumulators. All algorithms
// minimize; pass the negated figure of merit to maximize.
struct OptimizerState {
  OptAlgo algo = OptAlgo::Adam;
  double lr = 1e-3;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;
  double rms_decay = 0.99; // RMSProp squared-gradient averaging
  VecR m, v;               // first moment / velocity, squared accumulator
  long step = 0;

  void init(Eigen::Index dim);
};

void optimizer_step(OptimizerState& state, VecR& p, const VecR& g);

// Central differences (f(p + h_i e_i) - f(p - h_i e_i)) / (2 h_i) per
// coordinate; the 2n evaluations fan out over `jobs` workers.
VecR fd_gradient(const std::function<double(const VecR&)>& f, const VecR& p,
                 const VecR& h, int jobs = 1);

// Figure-of-merit description; validated against the simulation template.
struct FomSpec {
  enum class Kind { DeflectionEfficiency, SpectrumMse };
  Kind kind = Kind::DeflectionEfficiency;
  int order_m = 0, order_n = 0; // deflection target (Bloch indices)
  VecR wavelengths;             // spectrum grid, strictly positive and sorted
  VecR target;                  // reference spectrum on the grid
  SimConfig config;             // underlying simulation template

  void validate() const;
};

// Beam-deflector study: a single grating layer of `cells` permittivity
// cells between groove and ridge material, period chosen so the first
// transmitted order leaves at deflection_deg.
struct DeflectorSetup {
  double wavelength = 900.0;
  double deflection_deg = 50.0;
  double thickness = 325.0;
  double n_inc = 1.45; // illuminated through the substrate side
  double n_sub = 1.0;
  double n_ridge = 3.48;
  double n_groove = 1.0;
  int cells = 64;
  int fto = 40;
  FourierMode mode = FourierMode::CFS;
  // Deflection order t selects the transmitted order with kx = t*lambda/px;
  // under the Bloch convention kx_m = -m*lambda/px that is Bloch index -t.
};

SimConfig deflector_config(const DeflectorSetup& setup);

// Transmitted efficiency into the designed deflection order for a pattern
// of per-cell permittivities.
double deflection_efficiency(const DeflectorSetup& setup, const VecR& eps_cells);

// FoM callable over per-cell permittivities (validated FomSpec inside).
std::function<double(const VecR&)> deflection_fom(const DeflectorSetup& setup);

// Snaps a refractive-index pattern to the nearer of {n_lo, n_hi}; values at
// the threshold go to the material (n_hi). Default threshold is the
// midpoint.
VecR binary_push(const VecR& index_pattern, double n_lo, double n_hi);
VecR binary_push(const VecR& index_pattern, double n_lo, double n_hi, double threshold);

struct DeflectorRun {
  VecR gray_eff;  // per epoch, before the update (last entry: final pattern)
  VecR bin_eff;   // same epochs, after binary push
  MatR eps_history;         // (epochs+1) x cells permittivity trajectory
  VecR index_pattern;       // final gray-scale pattern (refractive index)
  VecR binary_pattern;      // binary push of the final pattern
  VecR best_binary_pattern; // best binarized device over the run
  double best_binary_eff = 0.0;
  int best_epoch = 0;
};

// Gradient-driven deflector optimization from a uniformly random gray
// pattern. Parameters are per-cell permittivities, clamped to the material
// range after every step; central differences use an absolute step of 1e-3.
DeflectorRun optimize_deflector(const DeflectorSetup& setup, int epochs, OptAlgo algo,
                                double lr, std::uint64_t seed, int jobs = 1);

// Spectral fitting demo stack: two patterned layers on a silicon substrate,
// eight dimension parameters with Gaussian priors.
struct FitParam {
  std::string name;
  double mean = 0.0;
  double stddev = 1.0;
  double truth = 0.0;
};

struct FitSetup {
  std::vector<FitParam> params;
  VecR wavelengths;
  double period = 300.0;
  double n_base = 1.45;   // embedding oxide
  double n_obj1 = 2.0;    // layer-1 objects
  double n_obj2 = 3.48;   // layer-2 objects
  double n_sub = 3.48;    // substrate
  int order_x = 1, order_y = 1;
  double psi = pi / 4.0;  // mixed polarization probes both axes
};

// The canonical eight-parameter configuration.
FitSetup ocd_demo_setup();

// Realizes the stack for one parameter vector; layer thicknesses are the
// last two parameters.
std::pair<VectorLayout, std::vector<double>> build_fit_stack(const FitSetup& setup,
                                                             const VecR& p);

// Specular reflectance spectrum over the setup's wavelength grid.
VecR fit_spectrum(const FitSetup& setup, const VecR& p, int jobs = 1);

// Mean-squared-error FoM against a target spectrum.
std::function<double(const VecR&)> spectrum_mse_fom(const FitSetup& setup,
                                                    const VecR& target, int jobs = 1);

struct FitRun {
  VecR loss;    // per iteration, evaluated before the update
  VecR p0;      // sampled initial parameters
  VecR p_final; // parameters after the last step
};

// Iterative spectrum fitting: forward spectra, MSE loss, finite-difference
// gradient, optimizer update. The initial guess is drawn from the
// configured priors with the given seed.
FitRun spectrum_fit(const FitSetup& setup, const VecR& target, OptAlgo algo, double lr,
                    int iterations, std::uint64_t seed, int jobs = 1);

} // namespace rcwa
