#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "curvpdc/common.hpp"
#include "curvpdc/fock.hpp"
#include "curvpdc/scs.hpp"

namespace curvpdc::pdc {

/// Squeezing parameter tau = r e^{i theta} of the classical-pump down-converter.
struct PDCParams {
  double r = 0.0;
  double theta = 0.0;  ///< in [0, 2 pi)
};

/// Validates r >= 0 and reduces theta to [0, 2 pi).
PDCParams make_params(double r, double theta);

struct TruncationPolicy {
  double tail_tol = 1e-12;  ///< admissible neglected (second-moment weighted) probability
  int max_pairs = 200;      ///< hard cap on the number of created pairs
};

void validate(const TruncationPolicy& policy);

/// Per-mode cutoff M + P for seeds on the M-photon antidiagonal.
///
/// P is the smallest pair count for which every seed component |m, M-m>
/// leaves a tail sum_{outside} (1 + n_s + n_i)^2 |amplitude|^2 below
/// tail_tol. The weight keeps first and second photon-number moments
/// converged along with the probability. Components live in distinct
/// n_s - n_i sectors, so the bound holds for any superposition of them.
/// Throws TruncationError when P would exceed max_pairs.
int choose_cutoff(int M, const PDCParams& pdc, const TruncationPolicy& policy);

struct Evolution {
  fock::TwoModeState state;
  int cutoff = 0;
  /// Analytic path: norm deficit before renormalization.
  /// Numeric path: probability on the outermost Fock layer.
  double leakage = 0.0;
};

/// Output of the down-converter from the disentangled (normal-ordered)
/// expansion. The seed is given by its normalized coefficients on
/// |m, M-m>, m = 0..M. The result is renormalized; Evolution::leakage
/// carries the deficit.
Evolution evolve_analytic(std::span<const Complex> seed, const PDCParams& pdc, const TruncationPolicy& policy);

Evolution evolve_analytic(const scs::SCSParams& seed, const PDCParams& pdc, const TruncationPolicy& policy);

/// The same expansion on a caller-chosen per-mode cutoff (>= M).
Evolution evolve_analytic_at(std::span<const Complex> seed, const PDCParams& pdc, int cutoff);

/// exp(tau L+ - tau* L-) applied to `input` inside the cutoff space.
///
/// The generator is built explicitly, one dense block per conserved
/// n_s - n_i sector, and exponentiated by linalg::expm. Throws
/// TruncationError when the outer-layer probability exceeds leakage_bound.
Evolution evolve_numeric(const fock::TwoModeState& input, const PDCParams& pdc, int cutoff,
                         double leakage_bound = 1e-8);

/// Several inputs through one set of sector exponentials.
std::vector<Evolution> evolve_numeric(std::span<const fock::TwoModeState> inputs, const PDCParams& pdc, int cutoff,
                                      double leakage_bound = 1e-8);

/// evolve_numeric with the cutoff grown by half until two successive results
/// agree (1 - fidelity < tol) and the outer-layer probability is below tol.
Evolution evolve_numeric_converged(const fock::TwoModeState& input, const PDCParams& pdc, double tol,
                                   int max_cutoff = 1024);

/// Batched form; all inputs share the cutoff schedule and must all converge.
std::vector<Evolution> evolve_numeric_converged(std::span<const fock::TwoModeState> inputs, const PDCParams& pdc,
                                                double tol, int max_cutoff = 1024);

enum class PairOp { raise, lower, weight };

/// Dense L+ = a_s^dag a_i^dag, L- = a_s a_i, or L0 = (n_s + n_i + 1)/2 on
/// the truncated space; basis index n_s * (cutoff + 1) + n_i.
Eigen::MatrixXcd pair_operator(PairOp op, int cutoff);

/// tau L+ - tau* L- on the full truncated space, same indexing.
Eigen::MatrixXcd generator_matrix(const PDCParams& pdc, int cutoff);

struct Su11Report {
  int cutoff = 0;
  double interior_res_pm = 0.0;  ///< |[L+, L-] + 2 L0| on n_s, n_i <= cutoff - 2
  double interior_res_0p = 0.0;  ///< |[L0, L+] - L+| on the same block
  double full_res_pm = 0.0;
  double full_res_0p = 0.0;
};

Su11Report su11_commutator_check(int cutoff);

}  // namespace curvpdc::pdc
