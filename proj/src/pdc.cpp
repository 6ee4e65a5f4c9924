#include "curvpdc/pdc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <fmt/format.h>

#include "curvpdc/expm.hpp"

namespace curvpdc::pdc {

PDCParams make_params(double r, double theta) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument(fmt::format("r must be finite and >= 0, got {}", r));
  if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double reduced = std::fmod(theta, two_pi);
  if (reduced < 0.0) reduced += two_pi;
  if (reduced >= two_pi) reduced = 0.0;
  return {r, reduced};
}

void validate(const TruncationPolicy& policy) {
  if (!(policy.tail_tol > 0.0 && policy.tail_tol < 1.0)) {
    throw InvalidArgument(fmt::format("tail_tol must lie in (0, 1), got {}", policy.tail_tol));
  }
  if (policy.max_pairs < 1) throw InvalidArgument(fmt::format("max_pairs must be >= 1, got {}", policy.max_pairs));
}

namespace {

// U |m, M-m> restricted to its sector d = 2m - M. Slot j holds the
// amplitude of |m - beta + j, M - m - beta + j>, beta = min(m, M - m),
// without the common phase e^{i (j - beta) theta}. Contributions of the
// (q, p) terms with p - q = j - beta are summed coherently.
std::vector<double> sector_profile(int M, int m, double t, double cosh_r, int j_max) {
  const int beta = std::min(m, M - m);
  std::vector<double> profile(j_max + 1, 0.0);
  for (int q = 0; q <= beta; ++q) {
    const int a = m - q;
    const int b = M - m - q;
    double term = std::sqrt(scs::binomial(m, q) * scs::binomial(M - m, q)) * std::pow(t, q) *
                  std::pow(cosh_r, -(M - 2 * q + 1));
    if (q % 2 == 1) term = -term;
    const int p_max = j_max - beta + q;
    for (int p = 0; p <= p_max; ++p) {
      profile[beta - q + p] += term;
      term *= t * std::sqrt(static_cast<double>(a + p + 1) * (b + p + 1)) / (p + 1);
      if (term == 0.0) break;
    }
  }
  return profile;
}

struct SectorGeometry {
  int d;     // n_s - n_i
  int beta;  // starting min(n_s, n_i) of the seed component
};

SectorGeometry geometry(int M, int m) { return {2 * m - M, std::min(m, M - m)}; }

// Weighted tail of every seed component for each candidate P in [0, p_try].
// Returns the smallest admissible P, or -1 when p_try is not large enough
// to decide.
int smallest_admissible(int M, double t, double cosh_r, int p_try, double tol) {
  std::vector<double> worst_tail(p_try + 1, 0.0);
  for (int m = 0; m <= M; ++m) {
    const auto [d, beta] = geometry(M, m);
    const int j_max = M + p_try - std::abs(d);
    const auto profile = sector_profile(M, m, t, cosh_r, j_max);

    // Extrapolate beyond the computed box from the decay of the last terms.
    const double last = profile[j_max] * profile[j_max];
    const double prev = j_max > 0 ? profile[j_max - 1] * profile[j_max - 1] : 0.0;
    double beyond = 0.0;
    if (last > 0.0) {
      const double ratio = prev > 0.0 ? std::max(last / prev, t * t) : t * t;
      if (ratio >= 1.0) return -1;
      const double w = 1.0 + M - 2.0 * beta + 2.0 * j_max;
      beyond = w * w * last * ratio / (1.0 - ratio);
    }

    // shell(j) = max(0, |d| + j - M); tail(P) = sum over shells > P.
    std::vector<double> shell_mass(p_try + 1, 0.0);
    for (int j = 0; j <= j_max; ++j) {
      const int shell = std::max(0, std::abs(d) + j - M);
      const double w = 1.0 + M - 2.0 * beta + 2.0 * j;
      shell_mass[shell] += w * w * profile[j] * profile[j];
    }
    double suffix = beyond;
    for (int p = p_try; p >= 0; --p) {
      worst_tail[p] = std::max(worst_tail[p], suffix);
      suffix += shell_mass[p];
    }
  }
  for (int p = 0; p < p_try; ++p) {
    if (worst_tail[p] < tol) return p;
  }
  return -1;
}

}  // namespace

int choose_cutoff(int M, const PDCParams& pdc, const TruncationPolicy& policy) {
  validate(policy);
  if (M < 1) throw InvalidArgument(fmt::format("M must be >= 1, got {}", M));
  const double t = std::tanh(pdc.r);
  if (t == 0.0) return M;
  if (t >= 1.0) throw TruncationError(fmt::format("r = {} saturates tanh(r) in double precision", pdc.r));
  const double cosh_r = std::cosh(pdc.r);
  int p_try = std::min(32, policy.max_pairs + 1);
  for (;;) {
    const int p = smallest_admissible(M, t, cosh_r, p_try, policy.tail_tol);
    if (p >= 0) {
      if (p > policy.max_pairs) break;
      return M + p;
    }
    if (p_try > policy.max_pairs) break;
    p_try = std::min(2 * p_try, policy.max_pairs + 1);
  }
  throw TruncationError(fmt::format(
      "tail below {} needs more than max_pairs = {} pairs at r = {}, M = {}; raise the cap or lower r",
      policy.tail_tol, policy.max_pairs, pdc.r, M));
}

namespace {

int seed_order(std::span<const Complex> seed) {
  if (seed.size() < 2) throw InvalidArgument("seed needs coefficients for m = 0..M with M >= 1");
  long double seed_norm = 0.0L;
  for (const auto& c : seed) seed_norm += std::norm(c);
  if (std::abs(static_cast<double>(seed_norm) - 1.0) > 1e-10) {
    throw InvalidArgument(fmt::format("seed must be normalized, norm^2 = {}", static_cast<double>(seed_norm)));
  }
  return static_cast<int>(seed.size()) - 1;
}

Evolution assemble(std::span<const Complex> seed, int M, const PDCParams& pdc, int cutoff) {
  const double t = std::tanh(pdc.r);
  const double cosh_r = std::cosh(pdc.r);

  std::vector<fock::Entry> entries;
  entries.reserve(static_cast<std::size_t>(M + 1) * (cutoff + 1));
  long double kept = 0.0L;
  for (int m = 0; m <= M; ++m) {
    if (seed[m] == Complex{}) continue;
    const auto [d, beta] = geometry(M, m);
    const int j_max = cutoff - std::abs(d);
    const auto profile = sector_profile(M, m, t, cosh_r, j_max);
    for (int j = 0; j <= j_max; ++j) {
      if (profile[j] == 0.0) continue;
      const Complex amp = seed[m] * std::polar(profile[j], (j - beta) * pdc.theta);
      kept += std::norm(amp);
      entries.push_back({{m - beta + j, M - m - beta + j}, amp});
    }
  }
  auto raw = fock::TwoModeState::from_entries(cutoff, cutoff, std::move(entries));
  const double deficit = std::max(0.0, 1.0 - static_cast<double>(kept));
  return {fock::normalize(raw), cutoff, deficit};
}

}  // namespace

Evolution evolve_analytic(std::span<const Complex> seed, const PDCParams& pdc, const TruncationPolicy& policy) {
  const int M = seed_order(seed);
  return assemble(seed, M, pdc, choose_cutoff(M, pdc, policy));
}

Evolution evolve_analytic_at(std::span<const Complex> seed, const PDCParams& pdc, int cutoff) {
  const int M = seed_order(seed);
  if (cutoff < M) throw InvalidArgument(fmt::format("cutoff {} is below M = {}", cutoff, M));
  return assemble(seed, M, pdc, cutoff);
}

Evolution evolve_analytic(const scs::SCSParams& seed, const PDCParams& pdc, const TruncationPolicy& policy) {
  const auto coeffs = scs::scs_coefficients(seed);
  return evolve_analytic(coeffs, pdc, policy);
}

std::vector<Evolution> evolve_numeric(std::span<const fock::TwoModeState> inputs, const PDCParams& pdc, int cutoff,
                                      double leakage_bound) {
  std::map<int, std::vector<std::pair<std::size_t, fock::Entry>>> sectors;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const auto& input = inputs[k];
    if (cutoff < std::max(input.cutoff_s(), input.cutoff_i())) {
      throw InvalidArgument(fmt::format("cutoff {} is below the input cutoffs ({}, {})", cutoff, input.cutoff_s(),
                                        input.cutoff_i()));
    }
    const double norm2 = input.norm_squared();
    if (std::abs(norm2 - 1.0) > 1e-10) {
      throw InvalidArgument(fmt::format("input must be unit-norm, norm^2 = {}", norm2));
    }
    for (const auto& e : input.entries()) sectors[e.index.n_s - e.index.n_i].push_back({k, e});
  }

  const Complex tau = std::polar(pdc.r, pdc.theta);
  std::vector<std::vector<fock::Entry>> out(inputs.size());
  std::vector<double> leakage(inputs.size(), 0.0);
  for (const auto& [d, members] : sectors) {
    const int off_s = std::max(d, 0);
    const int off_i = std::max(-d, 0);
    const int len = cutoff - std::abs(d) + 1;
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(len, len);
    for (int j = 0; j + 1 < len; ++j) {
      const double c = std::sqrt(static_cast<double>(j + off_s + 1) * (j + off_i + 1));
      gen(j + 1, j) = tau * c;
      gen(j, j + 1) = -std::conj(tau) * c;
    }
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(len, static_cast<Eigen::Index>(inputs.size()));
    for (const auto& [k, e] : members) v(e.index.n_s - off_s, static_cast<Eigen::Index>(k)) = e.amplitude;
    const Eigen::MatrixXcd w = linalg::expm(gen) * v;
    std::vector<std::size_t> owners;
    for (const auto& member : members) owners.push_back(member.first);
    owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
    for (std::size_t k : owners) {
      const auto col = w.col(static_cast<Eigen::Index>(k));
      leakage[k] += std::norm(col(len - 1));
      for (int j = 0; j < len; ++j) out[k].push_back({{j + off_s, j + off_i}, col(j)});
    }
  }

  std::vector<Evolution> results;
  results.reserve(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (leakage[k] > leakage_bound) {
      throw TruncationError(fmt::format("probability {} reached the cutoff layer {} (bound {}); use a larger cutoff",
                                        leakage[k], cutoff, leakage_bound));
    }
    results.push_back({fock::TwoModeState::from_entries(cutoff, cutoff, std::move(out[k])), cutoff, leakage[k]});
  }
  return results;
}

Evolution evolve_numeric(const fock::TwoModeState& input, const PDCParams& pdc, int cutoff, double leakage_bound) {
  return std::move(evolve_numeric(std::span(&input, 1), pdc, cutoff, leakage_bound).front());
}

std::vector<Evolution> evolve_numeric_converged(std::span<const fock::TwoModeState> inputs, const PDCParams& pdc,
                                                double tol, int max_cutoff) {
  int cutoff = 0;
  for (const auto& input : inputs) cutoff = std::max({cutoff, input.cutoff_s(), input.cutoff_i()});
  cutoff += 8;
  auto previous = evolve_numeric(inputs, pdc, cutoff, 1.0);
  while (cutoff + std::max(8, cutoff / 2) <= max_cutoff) {
    cutoff += std::max(8, cutoff / 2);
    auto current = evolve_numeric(inputs, pdc, cutoff, 1.0);
    bool converged = true;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      converged = converged && 1.0 - fock::fidelity(previous[k].state, current[k].state) < tol && current[k].leakage < tol;
    }
    if (converged) return current;
    previous = std::move(current);
  }
  throw TruncationError(fmt::format("numeric evolution did not converge to {} below cutoff {}", tol, max_cutoff));
}

Evolution evolve_numeric_converged(const fock::TwoModeState& input, const PDCParams& pdc, double tol,
                                   int max_cutoff) {
  return std::move(evolve_numeric_converged(std::span(&input, 1), pdc, tol, max_cutoff).front());
}

Eigen::MatrixXcd pair_operator(PairOp op, int cutoff) {
  if (cutoff < 0) throw InvalidArgument("cutoff must be non-negative");
  const int side = cutoff + 1;
  const int dim = side * side;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  auto index = [side](int n_s, int n_i) { return n_s * side + n_i; };
  for (int n_s = 0; n_s <= cutoff; ++n_s) {
    for (int n_i = 0; n_i <= cutoff; ++n_i) {
      switch (op) {
        case PairOp::raise:
          if (n_s < cutoff && n_i < cutoff) {
            m(index(n_s + 1, n_i + 1), index(n_s, n_i)) = std::sqrt(static_cast<double>(n_s + 1) * (n_i + 1));
          }
          break;
        case PairOp::lower:
          if (n_s > 0 && n_i > 0) {
            m(index(n_s - 1, n_i - 1), index(n_s, n_i)) = std::sqrt(static_cast<double>(n_s) * n_i);
          }
          break;
        case PairOp::weight:
          m(index(n_s, n_i), index(n_s, n_i)) = 0.5 * (n_s + n_i + 1);
          break;
      }
    }
  }
  return m;
}

Eigen::MatrixXcd generator_matrix(const PDCParams& pdc, int cutoff) {
  const Complex tau = std::polar(pdc.r, pdc.theta);
  return tau * pair_operator(PairOp::raise, cutoff) - std::conj(tau) * pair_operator(PairOp::lower, cutoff);
}

Su11Report su11_commutator_check(int cutoff) {
  if (cutoff < 2) throw InvalidArgument(fmt::format("su(1,1) check needs cutoff >= 2, got {}", cutoff));
  const auto lp = pair_operator(PairOp::raise, cutoff);
  const auto lm = pair_operator(PairOp::lower, cutoff);
  const auto l0 = pair_operator(PairOp::weight, cutoff);
  const Eigen::MatrixXcd res_pm = lp * lm - lm * lp + 2.0 * l0;
  const Eigen::MatrixXcd res_0p = l0 * lp - lp * l0 - lp;

  const int side = cutoff + 1;
  std::vector<int> interior;
  for (int n_s = 0; n_s <= cutoff - 2; ++n_s) {
    for (int n_i = 0; n_i <= cutoff - 2; ++n_i) interior.push_back(n_s * side + n_i);
  }
  auto restricted = [&interior](const Eigen::MatrixXcd& m) {
    double worst = 0.0;
    for (int row : interior) {
      for (int col : interior) worst = std::max(worst, std::abs(m(row, col)));
    }
    return worst;
  };
  return {cutoff, restricted(res_pm), restricted(res_0p), linalg::max_abs(res_pm), linalg::max_abs(res_0p)};
}

}  // namespace curvpdc::pdc
