#pragma once

#include <vector>

#include "rcwa/types.hpp"

namespace rcwa {

// Incidence and stack scalars shared by every stage of a solve. Angles are
// radians; lengths use one consistent unit (the wavelength's).
struct SimConfig {
  double wavelength = 1.0;
  double theta = 0.0; // polar incidence angle
  double phi = 0.0;   // azimuth
  double psi = 0.0;   // polarization angle; pi/2 = TE (s), 0 = TM (p)
  double n_inc = 1.0; // superstrate index
  double n_sub = 1.0; // substrate index
  double period_x = 1.0;
  double period_y = 1.0;
  int order_x = 0; // M, harmonics along X
  int order_y = 0; // N, harmonics along Y
  std::vector<double> thickness; // per grating layer, top to bottom
  bool single_precision = false;

  double k0() const { return 2.0 * pi / wavelength; }
  HarmonicIndex harmonics() const { return HarmonicIndex{order_x, order_y}; }

  // psi = pi/2 * (1 - pol); pol 0 is TE, 1 is TM.
  void set_pol(double pol);
  void validate() const;
};

// Wavevector data for the superstrate and substrate, all normalized by k0.
template <class T>
struct KSpaceT {
  using VecT = Eigen::Vector<T, Eigen::Dynamic>;
  using VecCT = Eigen::Vector<std::complex<T>, Eigen::Dynamic>;

  HarmonicIndex idx;
  VecT kx, ky;          // in-plane Bloch wavevectors per order
  VecCT kz_inc, kz_sub; // out-of-plane, two-branch dispersion
  VecT fc, fs;          // cos/sin of each order's in-plane azimuth
  T n_inc{}, n_sub{};
  T k0{};
  T cos_theta{};
  int i00 = 0; // position of the (0,0) order
  bool wood = false;

  int xi() const { return idx.xi(); }
  VecCT y_inc() const { return kz_inc; }
  VecCT y_sub() const { return kz_sub; }
  VecCT z_inc() const { return kz_inc / (n_inc * n_inc); }
  VecCT z_sub() const { return kz_sub / (n_sub * n_sub); }
};

using KSpace = KSpaceT<double>;

KSpace build_kspace(const SimConfig& config);

// Tangential field amplitudes of the unit-amplitude incident wave, stacked
// as [E_s; E_p; H_s; H_p] blocks of length xi.
VecC incident_excitation(const SimConfig& config);

template <class U>
KSpaceT<U> kspace_cast(const KSpace& k) {
  KSpaceT<U> out;
  out.idx = k.idx;
  out.kx = k.kx.template cast<U>();
  out.ky = k.ky.template cast<U>();
  out.kz_inc = k.kz_inc.template cast<std::complex<U>>();
  out.kz_sub = k.kz_sub.template cast<std::complex<U>>();
  out.fc = k.fc.template cast<U>();
  out.fs = k.fs.template cast<U>();
  out.n_inc = static_cast<U>(k.n_inc);
  out.n_sub = static_cast<U>(k.n_sub);
  out.k0 = static_cast<U>(k.k0);
  out.cos_theta = static_cast<U>(k.cos_theta);
  out.i00 = k.i00;
  out.wood = k.wood;
  return out;
}

} // namespace rcwa
