#pragma once

#include <Eigen/Dense>

namespace curvpdc::linalg {

/// exp(A) by scaling and squaring with a diagonal Pade approximant.
///
/// The Pade degree (3, 5, 7, 9 or 13) and the number of squarings are
/// chosen from the 1-norm of A using the backward-error bounds of Higham's
/// 2005 algorithm.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

/// Largest |x_ij| of a matrix; the residual norm used across the library.
double max_abs(const Eigen::MatrixXcd& m);

}  // namespace curvpdc::linalg
