#pragma once

// Independent reference computations the solver tests check against. None
// of these call into the coupled-wave path.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rcwa/geometry.hpp"
#include "rcwa/types.hpp"

namespace oracles {

using rcwa::cd;
using rcwa::pi;

struct FilmStack {
  double n_inc = 1.0;
  double n_sub = 1.0;
  std::vector<double> n; // layer indices, top to bottom
  std::vector<double> d; // layer thicknesses
};

// Characteristic-matrix reflectance/transmittance of a planar film stack.
// pol is 's' or 'p'.
inline std::pair<double, double> film_rt(const FilmStack& stack, double lambda,
                                         double theta, char pol) {
  const double k0 = 2.0 * pi / lambda;
  const double kx = stack.n_inc * std::sin(theta);

  auto cos_in = [&](double n) -> cd {
    const cd c2 = cd(1.0, 0.0) - cd(kx * kx / (n * n), 0.0);
    cd c = std::sqrt(c2);
    if (c.real() < 0.0) c = -c;
    return c;
  };
  auto admittance = [&](double n, cd cost) -> cd {
    return pol == 's' ? n * cost : n / cost;
  };

  const cd eta_inc = admittance(stack.n_inc, cos_in(stack.n_inc));
  const cd eta_sub = admittance(stack.n_sub, cos_in(stack.n_sub));

  cd m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
  for (size_t i = 0; i < stack.n.size(); ++i) {
    const cd cost = cos_in(stack.n[i]);
    const cd delta = k0 * stack.n[i] * stack.d[i] * cost;
    const cd eta = admittance(stack.n[i], cost);
    const cd cd_ = std::cos(delta);
    const cd sd = std::sin(delta);
    const cd a11 = cd_, a12 = cd(0, 1) * sd / eta;
    const cd a21 = cd(0, 1) * sd * eta, a22 = cd_;
    const cd n11 = m11 * a11 + m12 * a21;
    const cd n12 = m11 * a12 + m12 * a22;
    const cd n21 = m21 * a11 + m22 * a21;
    const cd n22 = m21 * a12 + m22 * a22;
    m11 = n11;
    m12 = n12;
    m21 = n21;
    m22 = n22;
  }

  const cd b = m11 + m12 * eta_sub;
  const cd c = m21 + m22 * eta_sub;
  const cd denom = eta_inc * b + c;
  const cd r = (eta_inc * b - c) / denom;
  const double reflectance = std::norm(r);
  const double transmittance =
      4.0 * eta_inc.real() * eta_sub.real() / std::norm(denom);
  return {reflectance, transmittance};
}

// Fresnel amplitude for a bare interface at normal incidence.
inline double fresnel_r(double n1, double n2) { return (n1 - n2) / (n1 + n2); }

// Monte-Carlo area of the union of axis-aligned rectangles, sampled inside
// the given bounding box.
inline double mc_union_area(const std::vector<rcwa::Rectangle>& rects, double x0,
                            double y0, double x1, double y1, long samples,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
  long hits = 0;
  for (long s = 0; s < samples; ++s) {
    const double x = ux(rng);
    const double y = uy(rng);
    bool inside = false;
    for (const auto& r : rects) {
      if (std::abs(x - r.cx) <= r.lx / 2.0 && std::abs(y - r.cy) <= r.ly / 2.0) {
        inside = true;
        break;
      }
    }
    hits += inside ? 1 : 0;
  }
  return (x1 - x0) * (y1 - y0) * static_cast<double>(hits) / static_cast<double>(samples);
}

// Point-in-rotated-rectangle test (rotate the point back).
inline bool in_rotated_rect(double x, double y, double cx, double cy, double lx,
                            double ly, double angle) {
  const double dx = x - cx, dy = y - cy;
  const double c = std::cos(angle), s = std::sin(angle);
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  return std::abs(u) <= lx / 2.0 && std::abs(v) <= ly / 2.0;
}

inline double mc_rotated_rect_fill(double cx, double cy, double lx, double ly,
                                   double angle, double px, double py, long samples,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, px), uy(0.0, py);
  long hits = 0;
  for (long s = 0; s < samples; ++s)
    hits += in_rotated_rect(ux(rng), uy(rng), cx, cy, lx, ly, angle) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(samples);
}

} // namespace oracles
