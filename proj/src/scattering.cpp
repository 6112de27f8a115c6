#include "rcwa/scattering.hpp"

namespace rcwa {

namespace {

template <class T>
struct CoreOut {
  using VecCT = typename LayerEigenT<T>::VecCT;
  using MatT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  VecCT rs, rp, ts, tp;
  MatT de_r, de_t;
  std::vector<LayerEigenT<T>> layers;
  std::vector<std::pair<VecCT, VecCT>> modal; // (c+, c-) per layer, ETM path only
  bool regularized = false;
};

template <class T>
std::vector<LayerEigenT<T>> decompose_stack(const std::vector<typename LayerEigenT<T>::MatCT>& e_conv,
                                            const std::vector<typename LayerEigenT<T>::MatCT>& o_e_conv,
                                            const KSpaceT<T>& k, const std::vector<T>& thickness) {
  std::vector<LayerEigenT<T>> layers;
  layers.reserve(e_conv.size());
  for (size_t g = 0; g < e_conv.size(); ++g)
    layers.push_back(decompose_layer<T>(e_conv[g], o_e_conv[g], k, thickness[g],
                                        static_cast<int>(g)));
  return layers;
}

template <class T>
CoreOut<T> solve_core(const std::vector<typename LayerEigenT<T>::MatCT>& e_conv,
                      const std::vector<typename LayerEigenT<T>::MatCT>& o_e_conv,
                      const KSpaceT<T>& k, const std::vector<T>& thickness,
                      const typename LayerEigenT<T>::VecCT& excitation) {
  CoreOut<T> out;
  out.layers = decompose_stack<T>(e_conv, o_e_conv, k, thickness);
  for (const auto& l : out.layers) out.regularized |= l.regularized;

  const auto chain = etm_connect<T>(out.layers, k);
  const auto coeffs = solve_rayleigh<T>(chain.f1, chain.g1, excitation, k);
  out.rs = coeffs.rs;
  out.rp = coeffs.rp;
  std::tie(out.ts, out.tp) = propagate_t<T>(chain, coeffs.ts1, coeffs.tp1, &out.modal);
  std::tie(out.de_r, out.de_t) =
      diffraction_efficiencies<T>(out.rs, out.rp, out.ts, out.tp, k);
  return out;
}

// Plain transfer-matrix product with explicit X inversion.
template <class T>
CoreOut<T> naive_core(const std::vector<typename LayerEigenT<T>::MatCT>& e_conv,
                      const std::vector<typename LayerEigenT<T>::MatCT>& o_e_conv,
                      const KSpaceT<T>& k, const std::vector<T>& thickness,
                      const typename LayerEigenT<T>::VecCT& excitation) {
  using MatCT = typename LayerEigenT<T>::MatCT;
  using C = std::complex<T>;
  const int xi = k.xi();
  const C j{0, 1};

  CoreOut<T> out;
  out.layers = decompose_stack<T>(e_conv, o_e_conv, k, thickness);
  for (const auto& l : out.layers) out.regularized |= l.regularized;

  MatCT product = MatCT::Identity(4 * xi, 4 * xi);
  for (size_t g = 0; g < out.layers.size(); ++g) {
    const auto& layer = out.layers[g];
    MatCT big_w(2 * xi, 2 * xi), big_v(2 * xi, 2 * xi);
    big_w << layer.Wss, layer.Wsp, layer.Wps, layer.Wpp;
    big_v << layer.Vss, layer.Vsp, layer.Vps, layer.Vpp;
    const MatCT wx = big_w * layer.x.asDiagonal();
    const MatCT vx = big_v * layer.x.asDiagonal();

    MatCT lhs(4 * xi, 4 * xi), rhs(4 * xi, 4 * xi);
    lhs.topLeftCorner(2 * xi, 2 * xi) = big_w;
    lhs.topRightCorner(2 * xi, 2 * xi) = wx;
    lhs.bottomLeftCorner(2 * xi, 2 * xi) = big_v;
    lhs.bottomRightCorner(2 * xi, 2 * xi) = -vx;
    rhs.topLeftCorner(2 * xi, 2 * xi) = wx;
    rhs.topRightCorner(2 * xi, 2 * xi) = big_w;
    rhs.bottomLeftCorner(2 * xi, 2 * xi) = vx;
    rhs.bottomRightCorner(2 * xi, 2 * xi) = -big_v;

    // product *= lhs * rhs^-1, via rhs^T m^T = lhs^T
    const MatCT m = Eigen::PartialPivLU<MatCT>(rhs.transpose())
                        .solve(MatCT(lhs.transpose()))
                        .transpose();
    if (!m.allFinite())
      throw ConditioningError("transfer-matrix product overflowed in layer " +
                                  std::to_string(g) + " (thick layer); use the stable solver",
                              static_cast<int>(g));
    product = product * m;
  }

  MatCT fg = MatCT::Zero(4 * xi, 2 * xi);
  fg.block(0, 0, xi, xi).setIdentity();
  fg.block(xi, xi, xi, xi) = (j * k.z_sub()).asDiagonal();
  fg.block(2 * xi, 0, xi, xi) = (j * k.y_sub()).asDiagonal();
  fg.block(3 * xi, xi, xi, xi).setIdentity();
  const MatCT fg_top = product * fg;
  if (!fg_top.allFinite())
    throw ConditioningError("transfer-matrix product overflowed; use the stable solver");

  const auto coeffs = solve_rayleigh<T>(fg_top.topRows(2 * xi), fg_top.bottomRows(2 * xi),
                                        excitation, k);
  out.rs = coeffs.rs;
  out.rp = coeffs.rp;
  out.ts = coeffs.ts1;
  out.tp = coeffs.tp1;
  std::tie(out.de_r, out.de_t) =
      diffraction_efficiencies<T>(out.rs, out.rp, out.ts, out.tp, k);
  return out;
}

template <class T>
std::vector<typename LayerEigenT<T>::MatCT> cast_mats(const std::vector<MatC>& in) {
  std::vector<typename LayerEigenT<T>::MatCT> out;
  out.reserve(in.size());
  for (const auto& m : in) out.push_back(m.template cast<std::complex<T>>());
  return out;
}

ScatterResult run(const Geometry& geometry, const SimConfig& config, FourierMode mode,
                  bool naive) {
  config.validate();
  const ConvSet cs = conv_set(geometry, config, mode);
  const KSpace k = build_kspace(config);
  const VecC exc = incident_excitation(config);

  ScatterResult result;
  result.config = config;
  result.k = k;
  result.warnings.wood_anomaly = k.wood;

  if (!config.single_precision) {
    std::vector<double> d(config.thickness.begin(), config.thickness.end());
    CoreOut<double> core = naive
        ? naive_core<double>(cs.e_conv, cs.o_e_conv, k, d, exc)
        : solve_core<double>(cs.e_conv, cs.o_e_conv, k, d, exc);
    result.r_s = core.rs;
    result.r_p = core.rp;
    result.t_s = core.ts;
    result.t_p = core.tp;
    result.de_r = core.de_r;
    result.de_t = core.de_t;
    result.warnings.regularized_mode = core.regularized;
    if (!naive) {
      result.layers.resize(core.layers.size());
      for (size_t g = 0; g < core.layers.size(); ++g) {
        auto& lm = result.layers[g];
        lm.W = std::move(core.layers[g].W);
        lm.V = std::move(core.layers[g].V);
        lm.q = std::move(core.layers[g].q);
        lm.x = std::move(core.layers[g].x);
        lm.c_plus = std::move(core.modal[g].first);
        lm.c_minus = std::move(core.modal[g].second);
        lm.e_conv = cs.e_conv[g];
        lm.thickness = config.thickness[g];
      }
      result.has_internals = true;
    }
  } else {
    const auto kf = kspace_cast<float>(k);
    const auto ef = cast_mats<float>(cs.e_conv);
    const auto of = cast_mats<float>(cs.o_e_conv);
    std::vector<float> d(config.thickness.begin(), config.thickness.end());
    const Eigen::VectorXcf excf = exc.cast<cf>();
    CoreOut<float> core = naive ? naive_core<float>(ef, of, kf, d, excf)
                                : solve_core<float>(ef, of, kf, d, excf);
    result.r_s = core.rs.cast<cd>();
    result.r_p = core.rp.cast<cd>();
    result.t_s = core.ts.cast<cd>();
    result.t_p = core.tp.cast<cd>();
    result.de_r = core.de_r.cast<double>();
    result.de_t = core.de_t.cast<double>();
    result.warnings.regularized_mode = core.regularized;
    if (!naive) {
      result.layers.resize(core.layers.size());
      for (size_t g = 0; g < core.layers.size(); ++g) {
        auto& lm = result.layers[g];
        lm.W = core.layers[g].W.cast<cd>();
        lm.V = core.layers[g].V.cast<cd>();
        lm.q = core.layers[g].q.cast<cd>();
        lm.x = core.layers[g].x.cast<cd>();
        lm.c_plus = core.modal[g].first.cast<cd>();
        lm.c_minus = core.modal[g].second.cast<cd>();
        lm.e_conv = cs.e_conv[g];
        lm.thickness = config.thickness[g];
      }
      result.has_internals = true;
    }
  }
  return result;
}

} // namespace

ScatterResult solve(const Geometry& geometry, const SimConfig& config, FourierMode mode) {
  return run(geometry, config, mode, false);
}

ScatterResult naive_tmm_solve(const Geometry& geometry, const SimConfig& config,
                              FourierMode mode) {
  return run(geometry, config, mode, true);
}

} // namespace rcwa
