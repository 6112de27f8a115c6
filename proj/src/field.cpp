#include "rcwa/field.hpp"

#include <cmath>

namespace rcwa {

namespace {

constexpr cd kJ{0.0, 1.0};

void check_internals(const ScatterResult& result) {
  if (!result.has_internals)
    throw StateError("field reconstruction needs the internals stored by solve()");
}

// (c+, c-) weighted propagation factors at depth z inside a layer.
std::pair<VecC, VecC> mode_weights(const LayerModal& lm, double k0, double z) {
  const double d = lm.thickness;
  VecC fwd(lm.q.size()), bwd(lm.q.size());
  for (Eigen::Index i = 0; i < lm.q.size(); ++i) {
    fwd[i] = std::exp(-k0 * z * lm.q[i]) * lm.c_plus[i];
    bwd[i] = std::exp(-k0 * (d - z) * lm.q[i]) * lm.c_minus[i];
  }
  return {std::move(fwd), std::move(bwd)};
}

} // namespace

ModalSlice modal_fields_at(const ScatterResult& result, int layer, double z) {
  check_internals(result);
  const auto& lm = result.layers.at(layer);
  const int xi = result.k.xi();

  auto [fwd, bwd] = mode_weights(lm, result.k.k0, z);
  const VecC sxy = lm.W * (fwd + bwd);
  const VecC uxy = lm.V * (bwd - fwd);

  ModalSlice s;
  s.sx = sxy.head(xi);
  s.sy = sxy.tail(xi);
  s.ux = uxy.head(xi);
  s.uy = uxy.tail(xi);
  const VecC kx = result.k.kx.cast<cd>();
  const VecC ky = result.k.ky.cast<cd>();
  s.uz = kJ * (kx.cwiseProduct(s.sy) - ky.cwiseProduct(s.sx));
  s.sz = kJ * Eigen::PartialPivLU<MatC>(lm.e_conv)
                  .solve(kx.cwiseProduct(s.uy) - ky.cwiseProduct(s.ux));
  return s;
}

FieldCell calculate_field(const ScatterResult& result, int res_x, int res_y, int res_z) {
  check_internals(result);
  if (res_x < 1 || res_y < 1 || res_z < 1)
    throw DomainError("field resolutions must be >= 1");

  const auto& k = result.k;
  const int xi = k.xi();
  const int two_m = 2 * k.idx.M + 1;
  const int two_n = 2 * k.idx.N + 1;
  const int layer_count = static_cast<int>(result.layers.size());

  FieldCell cell;
  cell.nx = res_x;
  cell.ny = res_y;
  cell.nz = res_z * layer_count;
  cell.res_z = res_z;
  cell.data.assign(static_cast<size_t>(cell.nz) * res_y * res_x * FieldCell::components,
                   cd(0, 0));
  cell.layer_tops.resize(layer_count);

  // Synthesis matrices over cell-center sample points; kx depends only on
  // the x-order m, ky only on n.
  MatC px(res_x, two_m), py(res_y, two_n);
  for (int i = 0; i < res_x; ++i) {
    const double x = (i + 0.5) * result.config.period_x / res_x;
    for (int m = -k.idx.M; m <= k.idx.M; ++m) {
      const double kx = k.kx[k.idx.at(0, m)];
      px(i, m + k.idx.M) = std::exp(-kJ * (k.k0 * kx * x));
    }
  }
  for (int jv = 0; jv < res_y; ++jv) {
    const double y = (jv + 0.5) * result.config.period_y / res_y;
    for (int n = -k.idx.N; n <= k.idx.N; ++n) {
      const double ky = k.ky[k.idx.at(n, 0)];
      py(jv, n + k.idx.N) = std::exp(-kJ * (k.k0 * ky * y));
    }
  }

  auto synthesize = [&](const VecC& amps) -> MatC {
    MatC grid(two_n, two_m);
    for (int i = 0; i < xi; ++i) {
      auto [n, m] = k.idx.order(i);
      grid(n + k.idx.N, m + k.idx.M) = amps[i];
    }
    return py * grid * px.transpose(); // res_y x res_x
  };

  double z_top = 0.0;
  for (int g = 0; g < layer_count; ++g) {
    const auto& lm = result.layers[g];
    cell.layer_tops[g] = z_top;
    z_top += lm.thickness;
    for (int s = 0; s < res_z; ++s) {
      const double z = (s + 0.5) * lm.thickness / res_z;
      const ModalSlice slice = modal_fields_at(result, g, z);
      const MatC comps[FieldCell::components] = {
          synthesize(slice.sx),        synthesize(slice.sy),
          synthesize(slice.sz),        synthesize(-kJ * slice.ux),
          synthesize(-kJ * slice.uy),  synthesize(-kJ * slice.uz),
      };
      const int zi = g * res_z + s;
      for (int y = 0; y < res_y; ++y)
        for (int x = 0; x < res_x; ++x)
          for (int c = 0; c < FieldCell::components; ++c)
            cell.at(zi, y, x, c) = comps[c](y, x);
    }
  }
  return cell;
}

ContinuityReport tangential_continuity_check(const FieldCell& cell) {
  if (cell.res_z < 2) throw DomainError("continuity check needs res_z >= 2");
  const int layer_count = cell.res_z == 0 ? 0 : cell.nz / cell.res_z;
  ContinuityReport report;
  if (layer_count < 2) {
    report.per_interface = VecR::Zero(0);
    return report;
  }
  report.per_interface = VecR::Zero(layer_count - 1);
  const int tangential[4] = {0, 1, 3, 4}; // Ex, Ey, Hx, Hy
  for (int g = 0; g + 1 < layer_count; ++g) {
    const int z_above = g * cell.res_z + cell.res_z - 1;
    const int z_below = (g + 1) * cell.res_z;
    double worst = 0.0;
    for (int y = 0; y < cell.ny; ++y)
      for (int x = 0; x < cell.nx; ++x)
        for (int c : tangential)
          worst = std::max(worst,
                           std::abs(cell.at(z_above, y, x, c) - cell.at(z_below, y, x, c)));
    report.per_interface[g] = worst;
    report.max_mismatch = std::max(report.max_mismatch, worst);
  }
  return report;
}

} // namespace rcwa
