#pragma once

#include <utility>
#include <vector>

#include "rcwa/fourier.hpp"
#include "rcwa/geometry.hpp"
#include "rcwa/kspace.hpp"
#include "rcwa/layer_eigen.hpp"
#include "rcwa/types.hpp"

namespace rcwa {

// Enhanced-transmittance connection state. f1/g1 close the boundary system
// at the first layer; ainv_x and b hold the per-layer substitution factors
// A^-1 X and B needed to recover substrate coefficients and in-layer modal
// amplitudes afterwards.
template <class T>
struct EtmChainT {
  using MatCT = typename LayerEigenT<T>::MatCT;
  MatCT f1, g1; // 2*xi x 2*xi each
  std::vector<MatCT> ainv_x;
  std::vector<MatCT> b;
};

template <class T>
struct RayleighT {
  using VecCT = typename LayerEigenT<T>::VecCT;
  VecCT rs, rp;   // reflected s/p amplitudes, xi each
  VecCT ts1, tp1; // first-layer transmission unknowns of the reduced system
};

// Walks the stack from the last layer up, building F/G while keeping the
// exponentially small X factors out of every inversion.
template <class T>
EtmChainT<T> etm_connect(const std::vector<LayerEigenT<T>>& layers, const KSpaceT<T>& k) {
  using MatCT = typename LayerEigenT<T>::MatCT;
  using C = std::complex<T>;
  const int xi = k.xi();
  const C j{0, 1};

  MatCT f_next = MatCT::Zero(2 * xi, 2 * xi);
  MatCT g_next = MatCT::Zero(2 * xi, 2 * xi);
  f_next.topLeftCorner(xi, xi).setIdentity();
  f_next.bottomRightCorner(xi, xi) = (j * k.z_sub()).asDiagonal();
  g_next.topLeftCorner(xi, xi) = (j * k.y_sub()).asDiagonal();
  g_next.bottomRightCorner(xi, xi).setIdentity();

  const int count = static_cast<int>(layers.size());
  EtmChainT<T> chain;
  chain.ainv_x.resize(count);
  chain.b.resize(count);

  for (int g = count - 1; g >= 0; --g) {
    const auto& layer = layers[g];
    MatCT big_w(2 * xi, 2 * xi), big_v(2 * xi, 2 * xi);
    big_w << layer.Wss, layer.Wsp, layer.Wps, layer.Wpp;
    big_v << layer.Vss, layer.Vsp, layer.Vps, layer.Vpp;

    MatCT m4(4 * xi, 4 * xi);
    m4.topLeftCorner(2 * xi, 2 * xi) = big_w;
    m4.topRightCorner(2 * xi, 2 * xi) = big_w;
    m4.bottomLeftCorner(2 * xi, 2 * xi) = big_v;
    m4.bottomRightCorner(2 * xi, 2 * xi) = -big_v;

    MatCT rhs(4 * xi, 2 * xi);
    rhs.topRows(2 * xi) = f_next;
    rhs.bottomRows(2 * xi) = g_next;

    const MatCT ab = Eigen::PartialPivLU<MatCT>(m4).solve(rhs);
    if (!ab.allFinite())
      throw ConditioningError("singular mode-matching system in layer " + std::to_string(g), g);
    const MatCT a = ab.topRows(2 * xi);
    const MatCT b = ab.bottomRows(2 * xi);

    MatCT x_mat = MatCT::Zero(2 * xi, 2 * xi);
    x_mat.diagonal() = layer.x;
    const MatCT ainv_x = Eigen::PartialPivLU<MatCT>(a).solve(x_mat);
    if (!ainv_x.allFinite())
      throw ConditioningError("singular substitution factor in layer " + std::to_string(g), g);

    const MatCT xbax = layer.x.asDiagonal() * (b * ainv_x);
    f_next = big_w + big_w * xbax;
    g_next = big_v - big_v * xbax;

    chain.ainv_x[g] = ainv_x;
    chain.b[g] = b;
  }
  chain.f1 = std::move(f_next);
  chain.g1 = std::move(g_next);
  return chain;
}

// Closes the boundary system at the superstrate: one dense solve in the
// unknowns (T_s1, T_p1, R_s, R_p).
template <class T>
RayleighT<T> solve_rayleigh(const typename LayerEigenT<T>::MatCT& f1,
                            const typename LayerEigenT<T>::MatCT& g1,
                            const typename LayerEigenT<T>::VecCT& excitation,
                            const KSpaceT<T>& k) {
  using MatCT = typename LayerEigenT<T>::MatCT;
  using VecCT = typename LayerEigenT<T>::VecCT;
  using C = std::complex<T>;
  const int xi = k.xi();
  const C j{0, 1};

  MatCT sys = MatCT::Zero(4 * xi, 4 * xi);
  sys.topLeftCorner(2 * xi, 2 * xi) = f1;
  sys.block(2 * xi, 0, 2 * xi, 2 * xi) = g1;
  // minus the superstrate response [I, 0; 0, -jZ_I; -jY_I, 0; 0, I]
  sys.block(0, 2 * xi, xi, xi) = -MatCT::Identity(xi, xi);
  sys.block(xi, 3 * xi, xi, xi) = (j * k.z_inc()).asDiagonal();
  sys.block(2 * xi, 2 * xi, xi, xi) = (j * k.y_inc()).asDiagonal();
  sys.block(3 * xi, 3 * xi, xi, xi) = -MatCT::Identity(xi, xi);

  const VecCT u = Eigen::PartialPivLU<MatCT>(sys).solve(excitation);
  if (!u.allFinite()) throw ConditioningError("singular boundary system");

  RayleighT<T> out;
  out.ts1 = u.head(xi);
  out.tp1 = u.segment(xi, xi);
  out.rs = u.segment(2 * xi, xi);
  out.rp = u.segment(3 * xi, xi);
  return out;
}

// Applies the recorded A^-1 X factors from the first layer down, producing
// the substrate-side amplitudes. When modal_out is given, the per-layer
// coefficient pairs (c+, c-) are stored along the way.
template <class T>
std::pair<typename LayerEigenT<T>::VecCT, typename LayerEigenT<T>::VecCT>
propagate_t(const EtmChainT<T>& chain,
            const typename LayerEigenT<T>::VecCT& ts1,
            const typename LayerEigenT<T>::VecCT& tp1,
            std::vector<std::pair<typename LayerEigenT<T>::VecCT,
                                  typename LayerEigenT<T>::VecCT>>* modal_out = nullptr) {
  using VecCT = typename LayerEigenT<T>::VecCT;
  const int xi = static_cast<int>(ts1.size());
  VecCT t(2 * xi);
  t.head(xi) = ts1;
  t.tail(xi) = tp1;
  if (modal_out) modal_out->resize(chain.ainv_x.size());
  for (size_t g = 0; g < chain.ainv_x.size(); ++g) {
    const VecCT below = chain.ainv_x[g] * t;
    if (modal_out) (*modal_out)[g] = {t, chain.b[g] * below};
    t = below;
  }
  return {t.head(xi), t.tail(xi)};
}

// Power carried per order, normalized by the incident flux n_I cos(theta).
// Evanescent orders carry exactly zero.
template <class T>
std::pair<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>,
          Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>>
diffraction_efficiencies(const typename LayerEigenT<T>::VecCT& rs,
                         const typename LayerEigenT<T>::VecCT& rp,
                         const typename LayerEigenT<T>::VecCT& ts,
                         const typename LayerEigenT<T>::VecCT& tp,
                         const KSpaceT<T>& k) {
  using MatT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  const int rows = 2 * k.idx.N + 1;
  const int cols = 2 * k.idx.M + 1;
  const T flux = k.n_inc * k.cos_theta;
  MatT de_r(rows, cols), de_t(rows, cols);
  for (int i = 0; i < k.xi(); ++i) {
    auto [n, m] = k.idx.order(i);
    const T rs2 = std::norm(rs[i]);
    const T rp2 = std::norm(rp[i]);
    const T ts2 = std::norm(ts[i]);
    const T tp2 = std::norm(tp[i]);
    de_r(n + k.idx.N, m + k.idx.M) =
        rs2 * (k.kz_inc[i] / flux).real() +
        rp2 * (k.kz_inc[i] / (k.n_inc * k.n_inc) / flux).real();
    de_t(n + k.idx.N, m + k.idx.M) =
        ts2 * (k.kz_sub[i] / flux).real() +
        tp2 * (k.kz_sub[i] / (k.n_sub * k.n_sub) / flux).real();
  }
  return {std::move(de_r), std::move(de_t)};
}

// Stored per-layer internals that field reconstruction consumes.
struct LayerModal {
  MatC W, V;
  VecC q, x;
  VecC c_plus, c_minus;
  MatC e_conv;
  double thickness = 0.0;
};

struct ScatterResult {
  VecC r_s, r_p, t_s, t_p; // Rayleigh amplitudes, xi each
  MatR de_r, de_t;         // (2N+1) x (2M+1), row n+N, col m+M
  SolverWarnings warnings;

  SimConfig config;
  KSpace k;
  std::vector<LayerModal> layers;
  bool has_internals = false;

  double total_r() const { return de_r.sum(); }
  double total_t() const { return de_t.sum(); }
  double de_r_at(int n, int m) const { return de_r(n + config.order_y, m + config.order_x); }
  double de_t_at(int n, int m) const { return de_t(n + config.order_y, m + config.order_x); }
};

// Full forward solve: Fourier factorization, per-layer eigenmodes,
// enhanced-transmittance connection, Rayleigh amplitudes and efficiencies.
// Per-layer internals are stored for field reconstruction.
ScatterResult solve(const Geometry& geometry, const SimConfig& config, FourierMode mode);

// Reference path evaluating the plain multilayer transfer-matrix product
// with explicit X inversion. Unstable for thick layers by construction;
// useful only for cross-checks against `solve`.
ScatterResult naive_tmm_solve(const Geometry& geometry, const SimConfig& config,
                              FourierMode mode);

} // namespace rcwa
