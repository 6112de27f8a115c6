#include "rcwa/fourier.hpp"

#include <algorithm>
#include <cmath>

namespace rcwa {

namespace {

// exp(-2*pi*j * num/den) with the phase reduced by integer modulo, so that
// whole turns come out exactly 1.
cd unit_phase(long long num, long long den) {
  long long r = num % den;
  return std::polar(1.0, -2.0 * pi * static_cast<double>(r) / static_cast<double>(den));
}

// exp(-2*pi*j * u) for real u, reduced to [0, 1).
cd unit_phase(double u) {
  double r = u - std::floor(u);
  return std::polar(1.0, -2.0 * pi * r);
}

// DFS weight matrix: rows are orders -2K..2K, columns are sample positions.
MatC dfs_weights(int K, int P) {
  MatC w(4 * K + 1, P);
  for (int a = 0; a < 4 * K + 1; ++a) {
    const int order = a - 2 * K;
    for (int c = 0; c < P; ++c)
      w(a, c) = unit_phase(static_cast<long long>(order) * c, P) / static_cast<double>(P);
  }
  return w;
}

// Per-cell integrals of exp(-2*pi*j*order*x/period)/period over uniform
// cells [c, c+1]*period/P.
MatC cfs_weights_uniform(int K, int P) {
  MatC w(4 * K + 1, P);
  for (int a = 0; a < 4 * K + 1; ++a) {
    const int order = a - 2 * K;
    for (int c = 0; c < P; ++c) {
      if (order == 0) {
        w(a, c) = 1.0 / static_cast<double>(P);
      } else {
        const cd hi = unit_phase(static_cast<long long>(order) * (c + 1), P);
        const cd lo = unit_phase(static_cast<long long>(order) * c, P);
        w(a, c) = (hi - lo) / cd(0.0, -2.0 * pi * order);
      }
    }
  }
  return w;
}

// Same integrals over arbitrary cuts (normalized coordinates in [0, 1]).
MatC cfs_weights_cuts(int K, const std::vector<double>& cuts) {
  const int cells = static_cast<int>(cuts.size()) - 1;
  MatC w(4 * K + 1, cells);
  for (int a = 0; a < 4 * K + 1; ++a) {
    const int order = a - 2 * K;
    for (int c = 0; c < cells; ++c) {
      if (order == 0) {
        w(a, c) = cuts[c + 1] - cuts[c];
      } else {
        const cd hi = unit_phase(order * cuts[c + 1]);
        const cd lo = unit_phase(order * cuts[c]);
        w(a, c) = (hi - lo) / cd(0.0, -2.0 * pi * order);
      }
    }
  }
  return w;
}

CoeffGrid grid_from_weights(const MatC& values, const MatC& wx, const MatC& wy,
                            int M, int N, double period_x, double period_y) {
  CoeffGrid grid;
  grid.M = M;
  grid.N = N;
  grid.period_x = period_x;
  grid.period_y = period_y;
  grid.c = wy * values * wx.transpose();
  return grid;
}

int replication_factor(int extent, int M, int N) {
  const int need = 2 * (4 * std::max(M, N) + 1);
  if (extent >= need) return 1;
  return (need + extent - 1) / extent;
}

MatC reciprocal(const MatC& layer) {
  return layer.array().inverse().matrix();
}

VectorLayer reciprocal(const VectorLayer& layer) {
  VectorLayer out = layer;
  out.base_eps = 1.0 / out.base_eps;
  for (auto& r : out.rects) r.eps = 1.0 / r.eps;
  return out;
}

CoeffGrid coefficients_raster(const MatC& layer, int M, int N, double px, double py,
                              FourierMode mode) {
  switch (mode) {
    case FourierMode::DFS:
      return dfs_coefficients(layer, M, N, px, py);
    case FourierMode::EnhancedDFS:
      return dfs_coefficients(enhance_sampling(layer, M, N), M, N, px, py);
    case FourierMode::CFS:
      return cfs_coefficients(layer, M, N, px, py);
  }
  throw DomainError("unknown Fourier mode");
}

MatC invert_checked(const MatC& m, int layer_index) {
  Eigen::FullPivLU<MatC> lu(m);
  if (!lu.isInvertible())
    throw ConditioningError("singular 1/eps convolution matrix in layer " +
                                std::to_string(layer_index),
                            layer_index);
  return lu.inverse();
}

} // namespace

CoeffGrid dfs_coefficients(const MatC& layer, int M, int N,
                           double period_x, double period_y) {
  if (layer.rows() < 1 || layer.cols() < 1) throw ShapeError("layer array is empty");
  const MatC wx = dfs_weights(M, static_cast<int>(layer.cols()));
  const MatC wy = dfs_weights(N, static_cast<int>(layer.rows()));
  return grid_from_weights(layer, wx, wy, M, N, period_x, period_y);
}

MatC enhance_sampling(const MatC& layer, int M, int N) {
  const int fx = replication_factor(static_cast<int>(layer.cols()), M, N);
  const int fy = replication_factor(static_cast<int>(layer.rows()), M, N);
  if (fx == 1 && fy == 1) return layer;
  MatC out(layer.rows() * fy, layer.cols() * fx);
  for (Eigen::Index r = 0; r < out.rows(); ++r)
    for (Eigen::Index c = 0; c < out.cols(); ++c)
      out(r, c) = layer(r / fy, c / fx);
  return out;
}

CoeffGrid cfs_coefficients(const MatC& layer, int M, int N,
                           double period_x, double period_y) {
  if (layer.rows() < 1 || layer.cols() < 1) throw ShapeError("layer array is empty");
  const MatC wx = cfs_weights_uniform(M, static_cast<int>(layer.cols()));
  const MatC wy = cfs_weights_uniform(N, static_cast<int>(layer.rows()));
  return grid_from_weights(layer, wx, wy, M, N, period_x, period_y);
}

CoeffGrid cfs_coefficients(const VectorLayer& layer, int M, int N,
                           double period_x, double period_y) {
  // Flatten occlusion into an arrangement grid cut at every rectangle edge.
  std::vector<double> xs = {0.0, 1.0};
  std::vector<double> ys = {0.0, 1.0};
  for (const auto& r : layer.rects) {
    xs.push_back(std::clamp((r.cx - r.lx / 2.0) / period_x, 0.0, 1.0));
    xs.push_back(std::clamp((r.cx + r.lx / 2.0) / period_x, 0.0, 1.0));
    ys.push_back(std::clamp((r.cy - r.ly / 2.0) / period_y, 0.0, 1.0));
    ys.push_back(std::clamp((r.cy + r.ly / 2.0) / period_y, 0.0, 1.0));
  }
  auto dedupe = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedupe(xs);
  dedupe(ys);

  const int ncx = static_cast<int>(xs.size()) - 1;
  const int ncy = static_cast<int>(ys.size()) - 1;
  MatC values(ncy, ncx);
  for (int j = 0; j < ncy; ++j) {
    const double y = 0.5 * (ys[j] + ys[j + 1]) * period_y;
    for (int i = 0; i < ncx; ++i) {
      const double x = 0.5 * (xs[i] + xs[i + 1]) * period_x;
      values(j, i) = layout_eps_at(layer, x, y);
    }
  }
  const MatC wx = cfs_weights_cuts(M, xs);
  const MatC wy = cfs_weights_cuts(N, ys);
  return grid_from_weights(values, wx, wy, M, N, period_x, period_y);
}

MatC to_conv_mat(const CoeffGrid& grid) {
  if (grid.c.rows() != 4 * grid.N + 1 || grid.c.cols() != 4 * grid.M + 1)
    throw ShapeError("coefficient grid extent does not match its orders");
  const HarmonicIndex idx{grid.M, grid.N};
  const int xi = idx.xi();
  MatC conv(xi, xi);
  for (int row = 0; row < xi; ++row) {
    auto [n, m] = idx.order(row);
    for (int col = 0; col < xi; ++col) {
      auto [np, mp] = idx.order(col);
      conv(row, col) = grid.at(n - np, m - mp);
    }
  }
  return conv;
}

ConvSet conv_set(const Geometry& geometry, const SimConfig& config, FourierMode mode) {
  const int layer_count = geometry_layer_count(geometry);
  if (layer_count != static_cast<int>(config.thickness.size()))
    throw ShapeError("geometry layer count does not match thickness list");

  ConvSet set;
  set.M = config.order_x;
  set.N = config.order_y;
  set.e_conv.reserve(layer_count);
  set.o_e_conv.reserve(layer_count);

  if (const auto* cellp = std::get_if<UCell>(&geometry)) {
    for (int g = 0; g < layer_count; ++g) {
      const MatC& layer = cellp->layers[g];
      auto eps_grid = coefficients_raster(layer, set.M, set.N,
                                          config.period_x, config.period_y, mode);
      auto inv_grid = coefficients_raster(reciprocal(layer), set.M, set.N,
                                          config.period_x, config.period_y, mode);
      set.e_conv.push_back(to_conv_mat(eps_grid));
      set.o_e_conv.push_back(invert_checked(to_conv_mat(inv_grid), g));
    }
  } else {
    if (mode != FourierMode::CFS)
      throw DomainError("discrete Fourier modes require raster geometry");
    const auto& layout = std::get<VectorLayout>(geometry);
    for (int g = 0; g < layer_count; ++g) {
      const auto& layer = layout.layers[g];
      auto eps_grid = cfs_coefficients(layer, set.M, set.N,
                                       layout.period_x, layout.period_y);
      auto inv_grid = cfs_coefficients(reciprocal(layer), set.M, set.N,
                                       layout.period_x, layout.period_y);
      set.e_conv.push_back(to_conv_mat(eps_grid));
      set.o_e_conv.push_back(invert_checked(to_conv_mat(inv_grid), g));
    }
  }
  return set;
}

std::vector<CoeffGrid> layer_coefficients(const Geometry& geometry, const SimConfig& config,
                                          FourierMode mode) {
  std::vector<CoeffGrid> grids;
  const int layer_count = geometry_layer_count(geometry);
  grids.reserve(layer_count);
  if (const auto* cellp = std::get_if<UCell>(&geometry)) {
    for (int g = 0; g < layer_count; ++g)
      grids.push_back(coefficients_raster(cellp->layers[g], config.order_x, config.order_y,
                                          config.period_x, config.period_y, mode));
  } else {
    if (mode != FourierMode::CFS)
      throw DomainError("discrete Fourier modes require raster geometry");
    const auto& layout = std::get<VectorLayout>(geometry);
    for (int g = 0; g < layer_count; ++g)
      grids.push_back(cfs_coefficients(layout.layers[g], config.order_x, config.order_y,
                                       layout.period_x, layout.period_y));
  }
  return grids;
}

} // namespace rcwa
