#pragma once

#include <complex>

#include <Eigen/Dense>

namespace fjlim {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<double>;
using Vector = DenseVector<double>;
using Complex = std::complex<double>;
using ComplexVector = DenseVector<Complex>;
using Index = Eigen::Index;

}  // namespace fjlim
