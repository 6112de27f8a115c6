#pragma once

#include <variant>
#include <vector>

#include "rcwa/types.hpp"

namespace rcwa {

// Unit-cell permittivity stack in raster form. Layers are ordered from the
// superstrate side down; each layer is a (rows = Y, cols = X) grid of
// complex relative permittivity. 1-D gratings use a single row.
struct UCell {
  std::vector<MatC> layers;

  int layer_count() const { return static_cast<int>(layers.size()); }
  int rows() const { return layers.empty() ? 0 : static_cast<int>(layers[0].rows()); }
  int cols() const { return layers.empty() ? 0 : static_cast<int>(layers[0].cols()); }
};

// Stores the given values verbatim as relative permittivity. Throws
// ShapeError on an empty stack, an empty layer, or mismatched layer extents;
// DomainError if any entry has zero magnitude.
UCell new_raster(const std::vector<MatC>& values);

// Convenience for refractive-index input: squares every entry, then
// validates as new_raster does.
UCell raster_from_index(const std::vector<MatC>& indices);

// Axis-aligned rectangle inside one layer of a unit cell. Primitives listed
// later occlude earlier ones wherever they overlap (z_order is the position
// in the layer's list).
struct Rectangle {
  double cx = 0.0;
  double cy = 0.0;
  double lx = 0.0;
  double ly = 0.0;
  cd eps{1.0, 0.0};
  int z_order = 0;
};

Rectangle make_rectangle(double cx, double cy, double lx, double ly, cd eps);

// Decomposes a rectangle rotated by `angle` (radians, about its center)
// into axis-aligned sub-rectangles: n_split_y horizontal bands, each fitted
// against the rotated edges at the band's mid-height and split into
// n_split_x pieces. Bands are disjoint, so the pieces never overlap, and
// the union area converges to lx*ly as the split counts grow.
std::vector<Rectangle> rectangle_rotate(double cx, double cy, double lx, double ly,
                                        int n_split_x, int n_split_y, cd eps,
                                        double angle);

struct VectorLayer {
  cd base_eps{1.0, 0.0};
  std::vector<Rectangle> rects; // later entries occlude earlier ones
};

// Vector-modeled stack: per-layer base permittivity plus an ordered list of
// rectangles, all wrapped into [0, period_x) x [0, period_y).
struct VectorLayout {
  std::vector<VectorLayer> layers;
  double period_x = 1.0;
  double period_y = 1.0;

  int layer_count() const { return static_cast<int>(layers.size()); }
};

// Builds a layout from per-layer (base permittivity, rectangle list) pairs.
// Rectangles sticking out of the unit cell are wrapped periodically, which
// may split one input rectangle into up to four pieces; occlusion order is
// preserved. Overlaps are resolved at query time, never rejected.
VectorLayout draw(const std::vector<VectorLayer>& layer_info_list,
                  double period_x, double period_y);

// Point-wise permittivity of one layer: the last-listed rectangle covering
// (x, y), else the base. Rectangle edges count as inside, so a point on a
// shared edge resolves to the occluding primitive.
cd layout_eps_at(const VectorLayer& layer, double x, double y);

// Samples every layer at cell centers on an ny x nx grid.
UCell rasterize(const VectorLayout& layout, int nx, int ny);

// Either geometry description is accepted by the solver front end.
using Geometry = std::variant<UCell, VectorLayout>;

int geometry_layer_count(const Geometry& g);

} // namespace rcwa
