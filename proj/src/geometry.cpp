#include "rcwa/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace rcwa {

namespace {

void validate_ucell(const UCell& cell) {
  if (cell.layers.empty()) throw ShapeError("raster stack has no layers");
  const auto rows = cell.layers[0].rows();
  const auto cols = cell.layers[0].cols();
  if (rows == 0 || cols == 0) throw ShapeError("raster layer is empty");
  for (const auto& layer : cell.layers) {
    if (layer.rows() != rows || layer.cols() != cols)
      throw ShapeError("raster layers have mismatched extents");
    for (Eigen::Index r = 0; r < layer.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.cols(); ++c)
        if (std::abs(layer(r, c)) == 0.0)
          throw DomainError("raster permittivity entry has zero magnitude");
  }
}

// Wraps [lo, lo + len] into [0, period), splitting at the seam.
std::vector<std::pair<double, double>> wrap_interval(double lo, double len, double period) {
  if (len >= period) return {{0.0, period}};
  double s = std::fmod(lo, period);
  if (s < 0) s += period;
  if (s + len <= period) return {{s, s + len}};
  return {{s, period}, {0.0, s + len - period}};
}

} // namespace

UCell new_raster(const std::vector<MatC>& values) {
  UCell cell{values};
  validate_ucell(cell);
  return cell;
}

UCell raster_from_index(const std::vector<MatC>& indices) {
  std::vector<MatC> squared;
  squared.reserve(indices.size());
  for (const auto& layer : indices) squared.push_back(layer.array().square().matrix());
  return new_raster(squared);
}

Rectangle make_rectangle(double cx, double cy, double lx, double ly, cd eps) {
  if (!(lx > 0.0) || !(ly > 0.0)) throw DomainError("rectangle side lengths must be positive");
  return Rectangle{cx, cy, lx, ly, eps, 0};
}

std::vector<Rectangle> rectangle_rotate(double cx, double cy, double lx, double ly,
                                        int n_split_x, int n_split_y, cd eps,
                                        double angle) {
  if (!(lx > 0.0) || !(ly > 0.0)) throw DomainError("rectangle side lengths must be positive");
  if (n_split_x < 1 || n_split_y < 1) throw DomainError("split counts must be >= 1");

  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double hx = lx / 2.0, hy = ly / 2.0;
  // Corners of the rotated rectangle, counterclockwise.
  std::array<std::array<double, 2>, 4> corner = {{
      {cx + (+hx * c - +hy * s), cy + (+hx * s + +hy * c)},
      {cx + (-hx * c - +hy * s), cy + (-hx * s + +hy * c)},
      {cx + (-hx * c - -hy * s), cy + (-hx * s + -hy * c)},
      {cx + (+hx * c - -hy * s), cy + (+hx * s + -hy * c)},
  }};

  double ymin = corner[0][1], ymax = corner[0][1];
  for (const auto& p : corner) {
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }

  // x-extent of the convex hull at height y.
  auto x_range_at = [&](double y) {
    double xlo = std::numeric_limits<double>::infinity();
    double xhi = -xlo;
    for (int e = 0; e < 4; ++e) {
      const auto& p = corner[e];
      const auto& q = corner[(e + 1) % 4];
      if ((p[1] - y) * (q[1] - y) > 0.0) continue; // edge does not cross y
      if (p[1] == q[1]) {
        xlo = std::min({xlo, p[0], q[0]});
        xhi = std::max({xhi, p[0], q[0]});
      } else {
        double t = (y - p[1]) / (q[1] - p[1]);
        double x = p[0] + t * (q[0] - p[0]);
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
      }
    }
    return std::pair<double, double>{xlo, xhi};
  };

  std::vector<Rectangle> out;
  out.reserve(static_cast<size_t>(n_split_x) * n_split_y);
  const double band_h = (ymax - ymin) / n_split_y;
  int z = 0;
  for (int iy = 0; iy < n_split_y; ++iy) {
    const double y_mid = ymin + (iy + 0.5) * band_h;
    auto [xlo, xhi] = x_range_at(y_mid);
    if (!(xhi > xlo)) continue;
    const double piece_w = (xhi - xlo) / n_split_x;
    for (int ix = 0; ix < n_split_x; ++ix) {
      Rectangle r;
      r.cx = xlo + (ix + 0.5) * piece_w;
      r.cy = ymin + (iy + 0.5) * band_h;
      r.lx = piece_w;
      r.ly = band_h;
      r.eps = eps;
      r.z_order = z++;
      out.push_back(r);
    }
  }
  return out;
}

VectorLayout draw(const std::vector<VectorLayer>& layer_info_list,
                  double period_x, double period_y) {
  if (!(period_x > 0.0) || !(period_y > 0.0)) throw DomainError("periods must be positive");
  VectorLayout layout;
  layout.period_x = period_x;
  layout.period_y = period_y;
  layout.layers.reserve(layer_info_list.size());
  for (const auto& in : layer_info_list) {
    VectorLayer layer;
    layer.base_eps = in.base_eps;
    int z = 0;
    for (const auto& rect : in.rects) {
      if (!(rect.lx > 0.0) || !(rect.ly > 0.0))
        throw DomainError("rectangle side lengths must be positive");
      auto xs = wrap_interval(rect.cx - rect.lx / 2.0, std::min(rect.lx, period_x), period_x);
      auto ys = wrap_interval(rect.cy - rect.ly / 2.0, std::min(rect.ly, period_y), period_y);
      for (const auto& [y0, y1] : ys)
        for (const auto& [x0, x1] : xs) {
          Rectangle piece;
          piece.cx = (x0 + x1) / 2.0;
          piece.cy = (y0 + y1) / 2.0;
          piece.lx = x1 - x0;
          piece.ly = y1 - y0;
          piece.eps = rect.eps;
          piece.z_order = z;
          layer.rects.push_back(piece);
        }
      ++z;
    }
    layout.layers.push_back(std::move(layer));
  }
  return layout;
}

cd layout_eps_at(const VectorLayer& layer, double x, double y) {
  for (auto it = layer.rects.rbegin(); it != layer.rects.rend(); ++it) {
    const double hx = it->lx / 2.0, hy = it->ly / 2.0;
    if (x >= it->cx - hx && x <= it->cx + hx && y >= it->cy - hy && y <= it->cy + hy)
      return it->eps;
  }
  return layer.base_eps;
}

UCell rasterize(const VectorLayout& layout, int nx, int ny) {
  if (nx < 1 || ny < 1) throw DomainError("raster resolution must be >= 1");
  std::vector<MatC> layers;
  layers.reserve(layout.layers.size());
  for (const auto& layer : layout.layers) {
    MatC grid(ny, nx);
    for (int r = 0; r < ny; ++r) {
      const double y = (r + 0.5) * layout.period_y / ny;
      for (int c = 0; c < nx; ++c) {
        const double x = (c + 0.5) * layout.period_x / nx;
        grid(r, c) = layout_eps_at(layer, x, y);
      }
    }
    layers.push_back(std::move(grid));
  }
  return new_raster(layers);
}

int geometry_layer_count(const Geometry& g) {
  return std::visit([](const auto& v) { return v.layer_count(); }, g);
}

} // namespace rcwa
