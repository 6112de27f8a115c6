#pragma once

#include "rcwa/types.hpp"

namespace rcwa::eig {

template <class T>
struct DecompT {
  Eigen::Vector<std::complex<T>, Eigen::Dynamic> values;
  Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic> vectors;
};

// Dense non-Hermitian eigendecomposition (right eigenvectors). Throws
// NumericalError if the QR iteration fails to converge.
DecompT<double> geev(MatC a);
DecompT<float> geev(Eigen::MatrixXcf a);

} // namespace rcwa::eig
