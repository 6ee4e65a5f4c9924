#include "curvpdc/algebra.hpp"

#include <cmath>

#include <fmt/format.h>

#include "curvpdc/expm.hpp"

namespace curvpdc::algebra {

AlgebraParams make_params(double lambda, int M, std::optional<double> n_choice) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument(fmt::format("lambda must be finite and >= 0, got {}", lambda));
  }
  if (M < 1) throw InvalidArgument(fmt::format("M must be >= 1, got {}", M));
  return {lambda, M, n_choice.value_or(static_cast<double>(M))};
}

double coeff_c1(const AlgebraParams& p) {
  const double l = p.lambda;
  return 1.0 + l * std::sqrt(1.0 + l / 4.0) * (p.M + 1) + l * l * (p.M * (p.n_choice / 2.0 + 1.0) + 0.25);
}

double coeff_c2(const AlgebraParams& p) { return -0.5 * p.lambda * p.lambda; }

double radicand(const AlgebraParams& p, int n1, int n2) {
  return coeff_c1(p) + coeff_c2(p) * (static_cast<double>(n1) * n1 + static_cast<double>(n2) * (n2 + 2));
}

Eigen::MatrixXcd deformation_h(const AlgebraParams& p) {
  const double l = p.lambda;
  const int dim = p.M + 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    const double j0 = (2.0 * m - p.M) / 2.0;
    h(m, m) = 1.0 + l * std::sqrt(1.0 + l / 4.0) * (p.M + 1) -
              l * l * (2.0 * j0 * j0 - p.n_choice * (p.M / 2.0 + 1.0) - 0.25);
  }
  return h;
}

GeneratorMatrices build_generators(const AlgebraParams& p) {
  const int dim = p.M + 1;
  GeneratorMatrices g{Eigen::MatrixXcd::Zero(dim, dim), Eigen::MatrixXcd::Zero(dim, dim),
                      Eigen::MatrixXcd::Zero(dim, dim)};
  for (int m = 0; m < dim; ++m) g.j_zero(m, m) = (2.0 * m - p.M) / 2.0;
  for (int m = 0; m < p.M; ++m) {
    // a1^dagger a2 |m, M-m> = sqrt((m+1)(M-m)) |m+1, M-m-1>
    const double rad = radicand(p, m + 1, p.M - m - 1);
    if (!(rad > 0.0)) {
      throw AlgebraError(fmt::format("non-positive radicand {} at lambda={}, M={}, m={}", rad, p.lambda, p.M, m));
    }
    g.j_plus(m + 1, m) = std::sqrt(rad) * std::sqrt(static_cast<double>(m + 1) * (p.M - m));
  }
  g.j_minus = g.j_plus.adjoint();
  return g;
}

CommutatorReport commutator_report(const AlgebraParams& p) {
  const GeneratorMatrices g = build_generators(p);
  const Eigen::MatrixXcd h = deformation_h(p);
  CommutatorReport r;
  r.lambda = p.lambda;
  r.M = p.M;
  r.n_choice = p.n_choice;
  r.res_j0_jplus = linalg::max_abs(g.j_zero * g.j_plus - g.j_plus * g.j_zero - g.j_plus);
  r.res_j0_jminus = linalg::max_abs(g.j_zero * g.j_minus - g.j_minus * g.j_zero + g.j_minus);
  r.res_jpm = linalg::max_abs(g.j_plus * g.j_minus - g.j_minus * g.j_plus - 2.0 * g.j_zero * h);
  return r;
}

std::string to_json(const CommutatorReport& r) {
  return fmt::format(
      "{{\"lambda\": {:.17g}, \"M\": {}, \"N_choice\": {:.17g}, \"res_j0_jplus\": {:.17g}, "
      "\"res_j0_jminus\": {:.17g}, \"res_jpm\": {:.17g}}}",
      r.lambda, r.M, r.n_choice, r.res_j0_jplus, r.res_j0_jminus, r.res_jpm);
}

}  // namespace curvpdc::algebra
