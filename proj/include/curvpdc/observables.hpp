#pragma once

#include <map>
#include <optional>
#include <string>

#include <Eigen/Sparse>

#include "curvpdc/common.hpp"
#include "curvpdc/fock.hpp"

namespace curvpdc::obs {

/// Reduced single-mode state, indexed by photon number 0..cutoff.
/// Stored sparsely: output states of the down-converter give banded matrices.
struct DensityMatrix {
  Eigen::SparseMatrix<Complex> entries;

  int dimension() const { return static_cast<int>(entries.rows()); }
  Complex operator()(int row, int col) const { return entries.coeff(row, col); }
  Complex trace() const;
};

/// Partial trace keeping `keep`. Throws InvalidArgument for states whose
/// squared norm differs from 1 by more than 1e-9.
DensityMatrix reduced_density(const fock::TwoModeState& state, Mode keep);

/// 1 - Tr(rho^2).
double linear_entropy(const DensityMatrix& rho);

/// <n> computed as || a psi ||^2.
double mean_photon(const fock::TwoModeState& state, Mode mode);

/// (Var(n) - <n>) / <n>, evaluated as (<a^dag^2 a^2> - <n>^2) / <n>.
/// Empty when <n> = 0.
std::optional<double> mandel_q(const fock::TwoModeState& state, Mode mode);

/// <n_s n_i> / (<n_s><n_i>); empty when either mean vanishes.
std::optional<double> cross_correlation(const fock::TwoModeState& state);

/// Joint photon-number distribution P[n_s, n_i] = |psi(n_s, n_i)|^2.
/// Entries outside the stored support are zero.
class JointDistribution {
 public:
  JointDistribution(int cutoff_s, int cutoff_i, std::map<fock::FockIndex, double> probabilities);

  int cutoff_s() const { return cutoff_s_; }
  int cutoff_i() const { return cutoff_i_; }
  double operator()(int n_s, int n_i) const;
  const std::map<fock::FockIndex, double>& support() const { return probabilities_; }

  double total() const;
  /// sum_n n P_marginal(n) for the chosen mode.
  double marginal_mean(Mode mode) const;

 private:
  int cutoff_s_;
  int cutoff_i_;
  std::map<fock::FockIndex, double> probabilities_;
};

JointDistribution joint_distribution(const fock::TwoModeState& state);

/// Every measured quantity for one output state.
struct ObservableReport {
  double S = 0.0;
  double ns = 0.0;
  double ni = 0.0;
  std::optional<double> Qs;
  std::optional<double> Qi;
  std::optional<double> g2;
  double leakage = 0.0;
  std::optional<JointDistribution> joint;
};

ObservableReport measure(const fock::TwoModeState& state, double leakage, bool with_joint = true);

/// Classification by the sign of Q: "poissonian" when |Q| <= tol.
std::string classify_statistics(std::optional<double> q, double tol = 1e-9);

}  // namespace curvpdc::obs
