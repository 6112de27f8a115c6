#pragma once

#include <vector>

#include "rcwa/scattering.hpp"
#include "rcwa/types.hpp"

namespace rcwa {

// Field distribution sampled on a regular grid inside the grating layers.
// Components are ordered (Ex, Ey, Ez, Hx, Hy, Hz); H is in units of
// sqrt(eps0/mu0) times the incident electric amplitude. Z runs from the
// first layer's top downward, res_z samples per layer at cell centers.
struct FieldCell {
  std::vector<cd> data;
  int nz = 0, ny = 0, nx = 0;
  int res_z = 0;                  // samples per layer
  std::vector<double> layer_tops; // physical z offset of each layer's top

  static constexpr int components = 6;

  const cd& at(int z, int y, int x, int comp) const {
    return data[(static_cast<size_t>(z) * ny + y) * nx * components +
                static_cast<size_t>(x) * components + comp];
  }
  cd& at(int z, int y, int x, int comp) {
    return data[(static_cast<size_t>(z) * ny + y) * nx * components +
                static_cast<size_t>(x) * components + comp];
  }
};

// Per-order amplitudes of all six components at depth z (measured from the
// layer's top) inside one layer.
struct ModalSlice {
  VecC sx, sy, sz; // electric
  VecC ux, uy, uz; // scaled magnetic; H = -j * U
};

ModalSlice modal_fields_at(const ScatterResult& result, int layer, double z);

// Evaluates the modal expansion of every layer on a res_z x res_y x res_x
// grid (cell centers). Requires the solve internals; throws StateError when
// the result does not carry them.
FieldCell calculate_field(const ScatterResult& result, int res_x, int res_y, int res_z);

struct ContinuityReport {
  double max_mismatch = 0.0;
  VecR per_interface; // one entry per internal layer interface
};

// Max jump of the tangential components (Ex, Ey, Hx, Hy) across adjacent
// layer boundaries, evaluated from the one-sided samples nearest each
// interface. The sampling offset shrinks as res_z grows.
ContinuityReport tangential_continuity_check(const FieldCell& cell);

} // namespace rcwa
