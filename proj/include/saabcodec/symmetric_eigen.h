#ifndef SAABCODEC_SYMMETRIC_EIGEN_H_
#define SAABCODEC_SYMMETRIC_EIGEN_H_

#include <span>

#include "saabcodec/matrix.h"

namespace saabcodec {

// Eigenpairs of a symmetric matrix. Eigenvalues are non-increasing; row k of
// `eigenvectors` is the unit eigenvector for eigenvalues[k], with its first
// entry of magnitude > 1e-12 made positive.
template <int N>
struct EigenResult {
  Vec<N> eigenvalues{};
  SquareMatrix<N> eigenvectors;
  int sweeps = 0;
};

// Cyclic Jacobi. The input is symmetrized as (m + m^T) / 2 first. Stops when
// the off-diagonal Frobenius norm drops below 1e-12 * ||m||_F (100 sweeps at
// most). Equal eigenvalues keep the Jacobi output order. Throws
// kInvalidInput on non-finite entries.
template <int N>
EigenResult<N> SymmetricEigen(const SquareMatrix<N>& m);

// C = (1/T) sum z z^T with no mean removal. Throws kInsufficientData for
// fewer than two samples.
template <int N>
SquareMatrix<N> SecondMoment(std::span<const Vec<N>> samples);

// Sample covariance with the mean removed, population divisor.
template <int N>
SquareMatrix<N> CenteredCovariance(std::span<const Vec<N>> samples);

// sum_k lambda_k v_k v_k^T
template <int N>
SquareMatrix<N> Reconstruct(const EigenResult<N>& eig);

}  // namespace saabcodec

#endif  // SAABCODEC_SYMMETRIC_EIGEN_H_
