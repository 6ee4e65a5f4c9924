#pragma once

#include <functional>
#include <vector>

#include "curvpdc/common.hpp"
#include "curvpdc/fock.hpp"

namespace curvpdc::scs {

/// One two-mode sphere coherent state |z; lambda, M>.
struct SCSParams {
  double lambda = 0.0;
  int M = 1;
  Complex z{0.0, 0.0};
};

/// Throws InvalidArgument unless lambda >= 0, M >= 1 and z is finite.
void validate(const SCSParams& p);

/// g(lambda, m) = sqrt(lambda (M+1-m) + s) * sqrt(lambda m + s), s = sqrt(1 + lambda^2/4).
double g_deform(double lambda, int m, int M);

/// Signature of g_deform; lets callers substitute the deformation function.
using DeformationFn = std::function<double(double lambda, int m, int M)>;

/// [g(lambda, m)]! = prod_{k=1..m} g(lambda, k); 1 for m = 0.
double g_factorial(double lambda, int m, int M);

/// Binomial coefficient as a double: exact integer arithmetic up to n = 60,
/// log-gamma beyond.
double binomial(int n, int k);

/// sum_m C(M,m) ([g]!)^2 |z|^{2m}, accumulated in long double.
double normalization(const SCSParams& p);

/// Normalized expansion coefficients c_m of the state on |m, M-m>, m = 0..M.
/// Evaluated in log space so large curvatures and |z| do not overflow.
std::vector<Complex> scs_coefficients(const SCSParams& p, const DeformationFn& g = g_deform);

/// The state itself, on cutoffs (M, M).
fock::TwoModeState build_scs(const SCSParams& p);

}  // namespace curvpdc::scs
