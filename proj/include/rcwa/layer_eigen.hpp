#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "rcwa/eig.hpp"
#include "rcwa/kspace.hpp"
#include "rcwa/types.hpp"

namespace rcwa {

namespace detail {
template <class T> struct EigenTolerances;
template <> struct EigenTolerances<double> {
  static constexpr double residual = 1e-10;
  static constexpr double branch = 1e-14;
  static constexpr double root = 1e-12;
};
template <> struct EigenTolerances<float> {
  static constexpr float residual = 1e-3f;
  static constexpr float branch = 1e-6f;
  static constexpr float root = 1e-5f;
};
} // namespace detail

// Modal data of one grating layer: eigenvectors W, eigenvalue roots q,
// magnetic counterpart V, propagation factors X = exp(-k0 q d), and the
// recombined blocks on the s/p basis that the boundary equations consume.
template <class T>
struct LayerEigenT {
  using MatCT = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;
  using VecCT = Eigen::Vector<std::complex<T>, Eigen::Dynamic>;

  MatCT W, V; // 2*xi x 2*xi
  VecCT q;    // 2*xi, Re(q) >= 0; ties broken toward Im(q) > 0
  VecCT x;    // diag of X
  MatCT Wss, Wsp, Wps, Wpp;
  MatCT Vss, Vsp, Vps, Vpp;
  T residual{};
  bool regularized = false;
};

using LayerEigen = LayerEigenT<double>;

// Coupled-wave operator blocks for one layer. Returns (Omega^2, Omega_R);
// Omega^2 drives the eigenproblem, Omega_R maps W to V.
template <class T>
std::pair<typename LayerEigenT<T>::MatCT, typename LayerEigenT<T>::MatCT>
build_omega(const typename LayerEigenT<T>::MatCT& e_conv,
            const typename LayerEigenT<T>::MatCT& o_e_conv,
            const KSpaceT<T>& k) {
  using MatCT = typename LayerEigenT<T>::MatCT;
  const int xi = k.xi();
  if (e_conv.rows() != xi || e_conv.cols() != xi ||
      o_e_conv.rows() != xi || o_e_conv.cols() != xi)
    throw ShapeError("convolution matrix extent does not match the harmonic count");

  const typename LayerEigenT<T>::VecCT kx = k.kx.template cast<std::complex<T>>();
  const typename LayerEigenT<T>::VecCT ky = k.ky.template cast<std::complex<T>>();
  const MatCT identity = MatCT::Identity(xi, xi);

  Eigen::PartialPivLU<MatCT> elu(e_conv);
  const MatCT e_inv = elu.solve(identity);
  if (!e_inv.allFinite()) throw ConditioningError("singular eps convolution matrix");

  MatCT omega2(2 * xi, 2 * xi);
  // Ky^2 + (Kx E^-1 Kx - I) o_e_conv
  omega2.topLeftCorner(xi, xi) =
      MatCT(ky.array().square().matrix().asDiagonal()) +
      (kx.asDiagonal() * e_inv * kx.asDiagonal() - identity) * o_e_conv;
  // Kx (E^-1 Ky E - Ky)
  omega2.topRightCorner(xi, xi) =
      kx.asDiagonal() * (e_inv * (ky.asDiagonal() * e_conv) - MatCT(ky.asDiagonal()));
  // Ky (E^-1 Kx o_e_conv - Kx)
  omega2.bottomLeftCorner(xi, xi) =
      ky.asDiagonal() * (e_inv * (kx.asDiagonal() * o_e_conv) - MatCT(kx.asDiagonal()));
  // Kx^2 + (Ky E^-1 Ky - I) E
  omega2.bottomRightCorner(xi, xi) =
      MatCT(kx.array().square().matrix().asDiagonal()) +
      (ky.asDiagonal() * e_inv * ky.asDiagonal() - identity) * e_conv;

  MatCT omega_r(2 * xi, 2 * xi);
  omega_r.topLeftCorner(xi, xi) = MatCT((-kx.array() * ky.array()).matrix().asDiagonal());
  omega_r.topRightCorner(xi, xi) =
      MatCT(kx.array().square().matrix().asDiagonal()) - e_conv;
  omega_r.bottomLeftCorner(xi, xi) =
      o_e_conv - MatCT(ky.array().square().matrix().asDiagonal());
  omega_r.bottomRightCorner(xi, xi) = MatCT((ky.array() * kx.array()).matrix().asDiagonal());

  return {std::move(omega2), std::move(omega_r)};
}

namespace detail {

template <class T>
std::complex<T> branch_root(std::complex<T> lambda) {
  std::complex<T> q = std::sqrt(lambda);
  if (q.real() < T(0)) q = -q;
  if (std::abs(q.real()) <= EigenTolerances<T>::branch && q.imag() < T(0)) q = -q;
  return q;
}

} // namespace detail

// Solves Omega^2 W = W diag(q^2). Eigenvalue roots take the branch with
// Re(q) >= 0 so the X factors never grow; pairing between columns of W and
// entries of q is preserved and no ordering is imposed. When the
// off-diagonal blocks vanish exactly (collinear incidence on a 1-D grating)
// the two diagonal blocks are decomposed independently.
template <class T>
std::pair<typename LayerEigenT<T>::MatCT, typename LayerEigenT<T>::VecCT>
eig_layer(const typename LayerEigenT<T>::MatCT& omega2, int layer_index = -1,
          T* residual_out = nullptr) {
  using MatCT = typename LayerEigenT<T>::MatCT;
  using VecCT = typename LayerEigenT<T>::VecCT;
  if (!omega2.allFinite())
    throw NumericalError("non-finite coupled-wave operator", layer_index);

  const int two_xi = static_cast<int>(omega2.rows());
  const int xi = two_xi / 2;
  MatCT w;
  VecCT lambda;
  const bool block_diagonal =
      two_xi > 2 && omega2.topRightCorner(xi, xi).isZero(T(0)) &&
      omega2.bottomLeftCorner(xi, xi).isZero(T(0));
  if (block_diagonal) {
    auto d1 = eig::geev(omega2.topLeftCorner(xi, xi).eval());
    auto d2 = eig::geev(omega2.bottomRightCorner(xi, xi).eval());
    w = MatCT::Zero(two_xi, two_xi);
    w.topLeftCorner(xi, xi) = d1.vectors;
    w.bottomRightCorner(xi, xi) = d2.vectors;
    lambda.resize(two_xi);
    lambda.head(xi) = d1.values;
    lambda.tail(xi) = d2.values;
  } else {
    auto dec = eig::geev(omega2);
    w = std::move(dec.vectors);
    lambda = std::move(dec.values);
  }

  VecCT q(two_xi);
  for (int i = 0; i < two_xi; ++i) q[i] = detail::branch_root<T>(lambda[i]);

  const MatCT lhs = omega2 * w;
  const VecCT q2 = q.array().square();
  const T denom = lhs.norm();
  const T res = denom == T(0) ? T(0) : (lhs - w * q2.asDiagonal()).norm() / denom;
  if (residual_out) *residual_out = res;
  if (res > detail::EigenTolerances<T>::residual)
    throw NumericalError("eigendecomposition residual " + std::to_string(res) +
                             " exceeds tolerance",
                         layer_index);
  return {std::move(w), std::move(q)};
}

// V = Omega_R W diag(q)^-1. Near-zero roots are nudged to
// root_tol * (1+j)/sqrt(2) before inversion; the flag reports it.
template <class T>
typename LayerEigenT<T>::MatCT
v_matrix(const typename LayerEigenT<T>::MatCT& omega_r,
         const typename LayerEigenT<T>::MatCT& w,
         const typename LayerEigenT<T>::VecCT& q, bool* regularized = nullptr) {
  using VecCT = typename LayerEigenT<T>::VecCT;
  const T tol = detail::EigenTolerances<T>::root;
  VecCT q_inv(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    std::complex<T> qi = q[i];
    if (std::abs(qi) < tol) {
      qi = std::complex<T>(tol / std::sqrt(T(2)), tol / std::sqrt(T(2)));
      if (regularized) *regularized = true;
    }
    if (std::abs(qi) == T(0)) throw NumericalError("singular layer mode (q = 0)");
    q_inv[i] = std::complex<T>(1) / qi;
  }
  return omega_r * w * q_inv.asDiagonal();
}

// X = diag(exp(-k0 q d)).
template <class T>
typename LayerEigenT<T>::VecCT
x_matrix(const typename LayerEigenT<T>::VecCT& q, T k0, T d) {
  if (d < T(0)) throw DomainError("layer thickness must be >= 0");
  typename LayerEigenT<T>::VecCT x(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) x[i] = std::exp(-k0 * d * q[i]);
  return x;
}

// Recombines the XY-basis quadrants of W and V onto the s/p basis.
template <class T>
void sp_recombine(LayerEigenT<T>& layer, const KSpaceT<T>& k) {
  const int xi = k.xi();
  const typename LayerEigenT<T>::VecCT fc = k.fc.template cast<std::complex<T>>();
  const typename LayerEigenT<T>::VecCT fs = k.fs.template cast<std::complex<T>>();
  const auto w11 = layer.W.topLeftCorner(xi, xi);
  const auto w12 = layer.W.topRightCorner(xi, xi);
  const auto w21 = layer.W.bottomLeftCorner(xi, xi);
  const auto w22 = layer.W.bottomRightCorner(xi, xi);
  const auto v11 = layer.V.topLeftCorner(xi, xi);
  const auto v12 = layer.V.topRightCorner(xi, xi);
  const auto v21 = layer.V.bottomLeftCorner(xi, xi);
  const auto v22 = layer.V.bottomRightCorner(xi, xi);

  layer.Wss = fc.asDiagonal() * w21 - fs.asDiagonal() * w11;
  layer.Wsp = fc.asDiagonal() * w22 - fs.asDiagonal() * w12;
  layer.Wps = fc.asDiagonal() * w11 + fs.asDiagonal() * w21;
  layer.Wpp = fc.asDiagonal() * w12 + fs.asDiagonal() * w22;
  layer.Vss = fc.asDiagonal() * v11 + fs.asDiagonal() * v21;
  layer.Vsp = fc.asDiagonal() * v12 + fs.asDiagonal() * v22;
  layer.Vps = fc.asDiagonal() * v21 - fs.asDiagonal() * v11;
  layer.Vpp = fc.asDiagonal() * v22 - fs.asDiagonal() * v12;
}

template <class T>
LayerEigenT<T> decompose_layer(const typename LayerEigenT<T>::MatCT& e_conv,
                               const typename LayerEigenT<T>::MatCT& o_e_conv,
                               const KSpaceT<T>& k, T thickness, int layer_index = -1) {
  LayerEigenT<T> layer;
  auto [omega2, omega_r] = build_omega<T>(e_conv, o_e_conv, k);
  std::tie(layer.W, layer.q) = eig_layer<T>(omega2, layer_index, &layer.residual);
  layer.V = v_matrix<T>(omega_r, layer.W, layer.q, &layer.regularized);
  layer.x = x_matrix<T>(layer.q, k.k0, thickness);
  sp_recombine(layer, k);
  return layer;
}

} // namespace rcwa
