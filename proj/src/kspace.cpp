#include "rcwa/kspace.hpp"

#include <cmath>

namespace rcwa {

namespace {
constexpr double kWoodTol = 1e-10;
} // namespace

void SimConfig::set_pol(double pol) {
  if (pol < 0.0 || pol > 1.0) throw DomainError("pol must lie in [0, 1]");
  psi = pi / 2.0 * (1.0 - pol);
}

void SimConfig::validate() const {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  if (!(period_x > 0.0) || !(period_y > 0.0)) throw DomainError("periods must be positive");
  if (!(n_inc > 0.0) || !(n_sub > 0.0)) throw DomainError("cover indices must be positive");
  if (order_x < 0 || order_y < 0) throw DomainError("truncation orders must be >= 0");
  if (!(std::abs(theta) < pi / 2.0))
    throw DomainError("grazing incidence (|theta| >= 90 deg) is not supported");
  for (double d : thickness)
    if (d < 0.0) throw DomainError("layer thickness must be >= 0");
}

KSpace build_kspace(const SimConfig& config) {
  config.validate();
  KSpace k;
  k.idx = config.harmonics();
  const int xi = k.idx.xi();
  k.kx.resize(xi);
  k.ky.resize(xi);
  k.kz_inc.resize(xi);
  k.kz_sub.resize(xi);
  k.fc.resize(xi);
  k.fs.resize(xi);
  k.n_inc = config.n_inc;
  k.n_sub = config.n_sub;
  k.k0 = config.k0();
  k.cos_theta = std::cos(config.theta);
  k.i00 = k.idx.at(0, 0);

  const double st = std::sin(config.theta);
  const double lam = config.wavelength;

  auto kz_for = [&](double n, double kx, double ky) -> cd {
    double r2 = n * n - kx * kx - ky * ky;
    cd kz = r2 >= 0.0 ? cd(std::sqrt(r2), 0.0) : cd(0.0, -std::sqrt(-r2));
    if (std::abs(kz) < kWoodTol) { // grazing order, nudge off the singularity
      kz = cd(0.0, -kWoodTol);
      k.wood = true;
    }
    return kz;
  };

  for (int i = 0; i < xi; ++i) {
    auto [n, m] = k.idx.order(i);
    k.kx[i] = config.n_inc * st * std::cos(config.phi) - m * lam / config.period_x;
    k.ky[i] = config.n_inc * st * std::sin(config.phi) - n * lam / config.period_y;
    k.kz_inc[i] = kz_for(config.n_inc, k.kx[i], k.ky[i]);
    k.kz_sub[i] = kz_for(config.n_sub, k.kx[i], k.ky[i]);
    const double r = std::hypot(k.kx[i], k.ky[i]);
    if (r == 0.0) {
      k.fc[i] = 1.0;
      k.fs[i] = 0.0;
    } else {
      k.fc[i] = k.kx[i] / r;
      k.fs[i] = k.ky[i] / r;
    }
  }
  return k;
}

VecC incident_excitation(const SimConfig& config) {
  config.validate();
  const HarmonicIndex idx = config.harmonics();
  const int xi = idx.xi();
  const int i00 = idx.at(0, 0);
  const double sp = std::sin(config.psi);
  const double cp = std::cos(config.psi);
  const double ct = std::cos(config.theta);
  const cd j{0.0, 1.0};

  VecC exc = VecC::Zero(4 * xi);
  exc[i00] = sp;
  exc[xi + i00] = cp * ct;
  exc[2 * xi + i00] = j * sp * config.n_inc * ct;
  exc[3 * xi + i00] = -j * cp * config.n_inc;
  return exc;
}

} // namespace rcwa
