#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "curvpdc/common.hpp"

namespace curvpdc::algebra {

/// Parameters of the deformed su(2) generators on the subspace {|m, M-m>}.
struct AlgebraParams {
  double lambda = 0.0;  ///< sphere curvature 1/R^2, >= 0
  int M = 1;            ///< subspace dimension minus one, >= 1
  double n_choice = 1;  ///< value used for the symbol N in c1 and h; usually M
};

/// Validated construction; n_choice defaults to M.
AlgebraParams make_params(double lambda, int M, std::optional<double> n_choice = std::nullopt);

/// c1 = 1 + lambda (1 + lambda/4)^{1/2} (M+1) + lambda^2 [M (N/2 + 1) + 1/4].
double coeff_c1(const AlgebraParams& p);

/// c2 = -lambda^2 / 2.
double coeff_c2(const AlgebraParams& p);

/// c1 + c2 [n1^2 + n2 (n2 + 2)], the square of the deformation factor at occupations (n1, n2).
double radicand(const AlgebraParams& p, int n1, int n2);

/// h(lambda, M, J0) as a diagonal matrix on the subspace.
Eigen::MatrixXcd deformation_h(const AlgebraParams& p);

/// Generators in the basis |m, M-m>, m = 0..M (row/column index m).
struct GeneratorMatrices {
  Eigen::MatrixXcd j_plus;
  Eigen::MatrixXcd j_minus;
  Eigen::MatrixXcd j_zero;
};

/// Builds J+, J- = J+^dagger and J0. The square-root factor stands to the
/// left of a1^dagger a2, so it is evaluated on the shifted occupations.
/// Throws AlgebraError on a non-positive radicand.
GeneratorMatrices build_generators(const AlgebraParams& p);

/// Max-norm residuals of the three defining relations.
struct CommutatorReport {
  double lambda = 0.0;
  int M = 0;
  double n_choice = 0.0;
  double res_j0_jplus = 0.0;   ///< |[J0, J+] - J+|
  double res_j0_jminus = 0.0;  ///< |[J0, J-] + J-|
  double res_jpm = 0.0;        ///< |[J+, J-] - 2 J0 h|
};

CommutatorReport commutator_report(const AlgebraParams& p);

std::string to_json(const CommutatorReport& report);

}  // namespace curvpdc::algebra
