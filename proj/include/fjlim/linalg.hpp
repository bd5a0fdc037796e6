#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "fjlim/errors.hpp"
#include "fjlim/types.hpp"

// Dense small-n kernels shared by every other module. All functions are pure,
// accept arbitrary Eigen expressions, and return plain dense objects.

namespace fjlim {

namespace detail {

// Relative pivot threshold below which an LU factor is declared singular.
inline constexpr double kSingularPivotRel = 1e-13;

template <typename Scalar>
Eigen::PartialPivLU<DenseMatrix<Scalar>> checked_lu(const DenseMatrix<Scalar>& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error("checked_lu: matrix must be square and nonempty");
  }
  Eigen::PartialPivLU<DenseMatrix<Scalar>> lu(a);
  const double scale = a.cwiseAbs().maxCoeff();
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot == 0.0 || min_pivot < kSingularPivotRel * scale) {
    throw SingularMatrix("solve: pivot " + std::to_string(min_pivot) +
                         " below threshold " +
                         std::to_string(kSingularPivotRel * scale));
  }
  return lu;
}

}  // namespace detail

/// Solves A X = B by partial-pivoting LU.
///
/// Throws SingularMatrix when the smallest pivot falls below
/// 1e-13 * max|a_ij|.
template <typename DerivedA, typename DerivedB>
DenseMatrix<typename DerivedA::Scalar> solve_linear(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const DenseMatrix<Scalar> a_eval = a.eval();
  if (b.rows() != a_eval.rows()) {
    throw Error("solve_linear: dimension mismatch");
  }
  return detail::checked_lu<Scalar>(a_eval).solve(b.eval());
}

/// Determinant from the same LU factorization the solver uses.
template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const DenseMatrix<Scalar> a_eval = a.eval();
  if (a_eval.rows() != a_eval.cols()) {
    throw Error("determinant: matrix must be square");
  }
  return Eigen::PartialPivLU<DenseMatrix<Scalar>>(a_eval).determinant();
}

namespace detail {

// Eigenvalues of A'A in ascending order; the k-th singular value of A is
// sqrt(max(0, lambda_k)). Tiny negative or below-noise values are clamped so
// that numerically singular inputs report an exact zero.
template <typename Derived>
DenseVector<typename Derived::Scalar> gram_eigenvalues(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const DenseMatrix<Scalar> a_eval = a.eval();
  const DenseMatrix<Scalar> gram = a_eval.transpose() * a_eval;
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(gram);
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("gram_eigenvalues: eigensolver did not converge");
  }
  DenseVector<Scalar> ev = es.eigenvalues();
  const Scalar noise = 16 * Eigen::NumTraits<Scalar>::epsilon() *
                       std::max(Scalar(0), ev(ev.size() - 1));
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) <= noise) ev(i) = Scalar(0);
  }
  return ev;
}

}  // namespace detail

/// Maximum singular value, i.e. the spectral norm rho(A'A)^{1/2}.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return typename Derived::Scalar(0);
  const auto ev = detail::gram_eigenvalues(a);
  return std::sqrt(ev(ev.size() - 1));
}

/// Minimum singular value of a square matrix; exactly zero when A is
/// numerically singular.
template <typename Derived>
typename Derived::Scalar min_singular_value(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) {
    throw Error("min_singular_value: matrix must be square");
  }
  const auto ev = detail::gram_eigenvalues(a);
  return std::sqrt(ev(0));
}

/// Sherman-Morrison update: given A^{-1}, returns (A + uv')^{-1}.
///
/// Defined iff 1 + v'A^{-1}u != 0; throws DenominatorZero when the
/// denominator is within 1e-12 of zero.
template <typename DerivedA, typename DerivedU, typename DerivedV>
DenseMatrix<typename DerivedA::Scalar> rank_one_update_inverse(
    const Eigen::MatrixBase<DerivedA>& a_inv, const Eigen::MatrixBase<DerivedU>& u,
    const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedA::Scalar;
  const DenseMatrix<Scalar> a_inv_eval = a_inv.eval();
  const DenseVector<Scalar> a_inv_u = a_inv_eval * u.eval();
  const Eigen::RowVector<Scalar, Eigen::Dynamic> vt_a_inv =
      v.eval().transpose() * a_inv_eval;
  const Scalar denom = Scalar(1) + v.eval().dot(a_inv_u);
  if (std::abs(denom) <= 1e-12) {
    throw DenominatorZero("rank_one_update_inverse: 1 + v'A^{-1}u = " +
                          std::to_string(denom));
  }
  return a_inv_eval - (a_inv_u * vt_a_inv) / denom;
}

/// First-order inverse expansion A^{-1} - eps * A^{-1} X A^{-1}, an
/// O(eps^2)-accurate approximation of (A + eps X)^{-1}.
template <typename DerivedA, typename DerivedX>
DenseMatrix<typename DerivedA::Scalar> first_order_inverse(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedX>& x,
    typename DerivedA::Scalar eps) {
  using Scalar = typename DerivedA::Scalar;
  const DenseMatrix<Scalar> a_eval = a.eval();
  const auto lu = detail::checked_lu<Scalar>(a_eval);
  const DenseMatrix<Scalar> a_inv =
      lu.solve(DenseMatrix<Scalar>::Identity(a_eval.rows(), a_eval.cols()));
  return a_inv - eps * a_inv * x.eval() * a_inv;
}

}  // namespace fjlim
