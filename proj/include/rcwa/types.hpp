#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace rcwa {

using cd = std::complex<double>;
using cf = std::complex<float>;

using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Flattened ordering of the retained spatial harmonics. Order (n, m) with
// m in [-M, M] along X and n in [-N, N] along Y maps to
//   i = (n + N) * (2M + 1) + (m + M),
// so the X order varies fastest. All per-order vectors and diagonal
// matrices in the solver use this layout.
struct HarmonicIndex {
  int M = 0;
  int N = 0;

  int xi() const { return (2 * M + 1) * (2 * N + 1); }
  int at(int n, int m) const { return (n + N) * (2 * M + 1) + (m + M); }
  std::pair<int, int> order(int i) const {
    return {i / (2 * M + 1) - N, i % (2 * M + 1) - M};
  }
};

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Singular or numerically unusable matrix encountered while connecting
// layers or inverting convolution matrices.
struct ConditioningError : std::runtime_error {
  int layer = -1;
  explicit ConditioningError(const std::string& what, int layer_index = -1)
      : std::runtime_error(what), layer(layer_index) {}
};

struct NumericalError : std::runtime_error {
  int layer = -1;
  explicit NumericalError(const std::string& what, int layer_index = -1)
      : std::runtime_error(what), layer(layer_index) {}
};

struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-fatal conditions recorded during a solve.
struct SolverWarnings {
  bool wood_anomaly = false;     // a k_z was nudged off an exact zero
  bool regularized_mode = false; // an eigenvalue was nudged before inversion

  bool any() const { return wood_anomaly || regularized_mode; }
  void merge(const SolverWarnings& o) {
    wood_anomaly |= o.wood_anomaly;
    regularized_mode |= o.regularized_mode;
  }
};

} // namespace rcwa
