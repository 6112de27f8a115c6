#pragma once

#include <vector>

#include "rcwa/geometry.hpp"
#include "rcwa/kspace.hpp"
#include "rcwa/types.hpp"

namespace rcwa {

// Truncated Fourier coefficients of one layer's permittivity. The grid
// covers orders m in [-2M, 2M], n in [-2N, 2N] because Toeplitz assembly
// consumes order differences up to twice the truncation.
struct CoeffGrid {
  MatC c; // (4N+1) x (4M+1), row n + 2N, col m + 2M
  double period_x = 1.0;
  double period_y = 1.0;
  int M = 0;
  int N = 0;

  cd at(int n, int m) const { return c(n + 2 * N, m + 2 * M); }
};

enum class FourierMode { DFS, EnhancedDFS, CFS };

// Discrete Fourier series of a sampled layer:
//   c_{n,m} = (1/(Px*Py)) sum_{r,c} eps_{r,c} exp[-2*pi*j (m c/Px + n r/Py)].
CoeffGrid dfs_coefficients(const MatC& layer, int M, int N,
                           double period_x = 1.0, double period_y = 1.0);

// Block-replicates the array until each axis holds at least
// 2*(4*max(M,N)+1) samples (an exact multiple of the original extent),
// which removes aliasing in the order range the solver consumes. The value
// pattern is unchanged.
MatC enhance_sampling(const MatC& layer, int M, int N);

// Fourier series of the piecewise-constant function described by a raster
// grid (each cell constant over its extent). Exact per coefficient.
CoeffGrid cfs_coefficients(const MatC& layer, int M, int N,
                           double period_x = 1.0, double period_y = 1.0);

// Fourier series of a vector-modeled layer. The occlusion-resolved layer is
// flattened into disjoint constant rectangles first; each region then
// contributes its closed-form integral. Zero-area regions contribute
// nothing.
CoeffGrid cfs_coefficients(const VectorLayer& layer, int M, int N,
                           double period_x, double period_y);

// Assembles the xi x xi convolution (Toeplitz) matrix: the entry at
// (row idx(n,m), col idx(n',m')) is c_{n-n', m-m'}.
MatC to_conv_mat(const CoeffGrid& grid);

// Per-layer convolution matrices: e_conv realizes multiplication by eps in
// truncated Fourier space, o_e_conv is inverse(toeplitz(1/eps)) for the
// factorization rule.
struct ConvSet {
  std::vector<MatC> e_conv;
  std::vector<MatC> o_e_conv;
  int M = 0;
  int N = 0;

  int layer_count() const { return static_cast<int>(e_conv.size()); }
};

ConvSet conv_set(const Geometry& geometry, const SimConfig& config, FourierMode mode);

// Coefficient grids of eps per layer in the given mode (debug export).
std::vector<CoeffGrid> layer_coefficients(const Geometry& geometry, const SimConfig& config,
                                          FourierMode mode);

} // namespace rcwa
