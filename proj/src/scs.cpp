#include "curvpdc/scs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <fmt/format.h>

namespace curvpdc::scs {

void validate(const SCSParams& p) {
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) {
    throw InvalidArgument(fmt::format("lambda must be finite and >= 0, got {}", p.lambda));
  }
  if (p.M < 1) throw InvalidArgument(fmt::format("M must be >= 1, got {}", p.M));
  if (!std::isfinite(p.z.real()) || !std::isfinite(p.z.imag())) throw InvalidArgument("z must be finite");
}

double g_deform(double lambda, int m, int M) {
  const double s = std::sqrt(1.0 + lambda * lambda / 4.0);
  return std::sqrt(lambda * (M + 1 - m) + s) * std::sqrt(lambda * m + s);
}

double g_factorial(double lambda, int m, int M) {
  double product = 1.0;
  for (int k = 1; k <= m; ++k) product *= g_deform(lambda, k, M);
  return product;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 60) {
    std::uint64_t c = 1;
    // c * (n - k + j) is divisible by j at every step.
    for (int j = 1; j <= k; ++j) c = c * static_cast<std::uint64_t>(n - k + j) / static_cast<std::uint64_t>(j);
    return static_cast<double>(c);
  }
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

double normalization(const SCSParams& p) {
  validate(p);
  const long double z2 = std::norm(p.z);
  long double sum = 0.0L;
  long double z_power = 1.0L;
  for (int m = 0; m <= p.M; ++m) {
    const long double gf = g_factorial(p.lambda, m, p.M);
    sum += static_cast<long double>(binomial(p.M, m)) * gf * gf * z_power;
    z_power *= z2;
  }
  return static_cast<double>(sum);
}

std::vector<Complex> scs_coefficients(const SCSParams& p, const DeformationFn& g) {
  validate(p);
  const double abs_z = std::abs(p.z);
  const double phase = std::arg(p.z);
  std::vector<double> log_weight(p.M + 1, -std::numeric_limits<double>::infinity());
  double log_g_factorial = 0.0;
  for (int m = 0; m <= p.M; ++m) {
    if (m > 0) log_g_factorial += std::log(g(p.lambda, m, p.M));
    if (m > 0 && abs_z == 0.0) continue;
    log_weight[m] = 0.5 * std::log(binomial(p.M, m)) + log_g_factorial + m * std::log(abs_z > 0 ? abs_z : 1.0);
  }
  const double top = *std::max_element(log_weight.begin(), log_weight.end());
  long double total = 0.0L;
  for (double lw : log_weight) total += std::exp(2.0L * (lw - top));
  const double scale = 1.0 / std::sqrt(static_cast<double>(total));
  std::vector<Complex> coeffs(p.M + 1);
  for (int m = 0; m <= p.M; ++m) {
    coeffs[m] = std::polar(std::exp(log_weight[m] - top) * scale, m * phase);
  }
  return coeffs;
}

fock::TwoModeState build_scs(const SCSParams& p) {
  const auto coeffs = scs_coefficients(p);
  std::vector<fock::Entry> entries;
  entries.reserve(coeffs.size());
  for (int m = 0; m <= p.M; ++m) entries.push_back({{m, p.M - m}, coeffs[m]});
  return fock::TwoModeState::from_entries(p.M, p.M, std::move(entries));
}

}  // namespace curvpdc::scs
