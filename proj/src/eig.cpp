#include "rcwa/eig.hpp"

#include <lapacke.h>

namespace rcwa::eig {

DecompT<double> geev(MatC a) {
  const auto n = static_cast<lapack_int>(a.rows());
  DecompT<double> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n,
      reinterpret_cast<lapack_complex_double*>(out.values.data()), nullptr, 1,
      reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n);
  if (info != 0) throw NumericalError("zgeev failed with info " + std::to_string(info));
  return out;
}

DecompT<float> geev(Eigen::MatrixXcf a) {
  const auto n = static_cast<lapack_int>(a.rows());
  DecompT<float> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  lapack_int info = LAPACKE_cgeev(
      LAPACK_COL_MAJOR, 'N', 'V', n,
      reinterpret_cast<lapack_complex_float*>(a.data()), n,
      reinterpret_cast<lapack_complex_float*>(out.values.data()), nullptr, 1,
      reinterpret_cast<lapack_complex_float*>(out.vectors.data()), n);
  if (info != 0) throw NumericalError("cgeev failed with info " + std::to_string(info));
  return out;
}

} // namespace rcwa::eig
