#include "curvpdc/observables.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace curvpdc::obs {

Complex DensityMatrix::trace() const {
  Complex sum{};
  for (int k = 0; k < entries.outerSize(); ++k) sum += entries.coeff(k, k);
  return sum;
}

DensityMatrix reduced_density(const fock::TwoModeState& state, Mode keep) {
  const double norm2 = state.norm_squared();
  if (std::abs(norm2 - 1.0) > 1e-9) {
    throw InvalidArgument(fmt::format("reduced density needs a unit-norm state, norm^2 = {}", norm2));
  }
  const Mode traced = keep == Mode::signal ? Mode::idler : Mode::signal;
  const int dim = state.cutoff(keep) + 1;

  // Group amplitudes by the traced-out photon number k.
  std::vector<std::vector<std::pair<int, Complex>>> by_traced(state.cutoff(traced) + 1);
  for (const auto& e : state.entries()) {
    const int kept_n = keep == Mode::signal ? e.index.n_s : e.index.n_i;
    const int traced_n = keep == Mode::signal ? e.index.n_i : e.index.n_s;
    by_traced[traced_n].emplace_back(kept_n, e.amplitude);
  }

  // rho[n, n'] = sum_k psi[n, k] conj(psi[n', k])
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (const auto& column : by_traced) {
    for (const auto& [n, a] : column) {
      for (const auto& [n2, b] : column) triplets.emplace_back(n, n2, a * std::conj(b));
    }
  }
  DensityMatrix rho;
  rho.entries.resize(dim, dim);
  rho.entries.setFromTriplets(triplets.begin(), triplets.end());
  return rho;
}

double linear_entropy(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  long double purity = 0.0L;
  for (int k = 0; k < rho.entries.outerSize(); ++k) {
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(rho.entries, k); it; ++it) purity += std::norm(it.value());
  }
  return 1.0 - static_cast<double>(purity);
}

double mean_photon(const fock::TwoModeState& state, Mode mode) {
  return fock::apply_annihilation(state, mode).norm_squared();
}

std::optional<double> mandel_q(const fock::TwoModeState& state, Mode mode) {
  const auto lowered = fock::apply_annihilation(state, mode);
  const double mean = lowered.norm_squared();
  if (!(mean > 0.0)) return std::nullopt;
  const double factorial_moment = fock::apply_annihilation(lowered, mode).norm_squared();
  return (factorial_moment - mean * mean) / mean;
}

std::optional<double> cross_correlation(const fock::TwoModeState& state) {
  const auto lowered_s = fock::apply_annihilation(state, Mode::signal);
  const double ns = lowered_s.norm_squared();
  const double ni = mean_photon(state, Mode::idler);
  if (!(ns > 0.0) || !(ni > 0.0)) return std::nullopt;
  const double joint = fock::apply_annihilation(lowered_s, Mode::idler).norm_squared();
  return joint / (ns * ni);
}

JointDistribution::JointDistribution(int cutoff_s, int cutoff_i, std::map<fock::FockIndex, double> probabilities)
    : cutoff_s_(cutoff_s), cutoff_i_(cutoff_i), probabilities_(std::move(probabilities)) {}

double JointDistribution::operator()(int n_s, int n_i) const {
  auto it = probabilities_.find({n_s, n_i});
  return it == probabilities_.end() ? 0.0 : it->second;
}

double JointDistribution::total() const {
  long double sum = 0.0L;
  for (const auto& [index, p] : probabilities_) sum += p;
  return static_cast<double>(sum);
}

double JointDistribution::marginal_mean(Mode mode) const {
  std::vector<long double> marginal((mode == Mode::signal ? cutoff_s_ : cutoff_i_) + 1, 0.0L);
  for (const auto& [index, p] : probabilities_) marginal[mode == Mode::signal ? index.n_s : index.n_i] += p;
  long double mean = 0.0L;
  for (std::size_t n = 0; n < marginal.size(); ++n) mean += static_cast<long double>(n) * marginal[n];
  return static_cast<double>(mean);
}

JointDistribution joint_distribution(const fock::TwoModeState& state) {
  std::map<fock::FockIndex, double> probabilities;
  for (const auto& e : state.entries()) probabilities.emplace_hint(probabilities.end(), e.index, std::norm(e.amplitude));
  return {state.cutoff_s(), state.cutoff_i(), std::move(probabilities)};
}

ObservableReport measure(const fock::TwoModeState& state, double leakage, bool with_joint) {
  ObservableReport report;
  report.S = linear_entropy(reduced_density(state, Mode::signal));
  report.ns = mean_photon(state, Mode::signal);
  report.ni = mean_photon(state, Mode::idler);
  report.Qs = mandel_q(state, Mode::signal);
  report.Qi = mandel_q(state, Mode::idler);
  report.g2 = cross_correlation(state);
  report.leakage = leakage;
  if (with_joint) report.joint = joint_distribution(state);
  return report;
}

std::string classify_statistics(std::optional<double> q, double tol) {
  if (!q) return "undefined";
  if (std::abs(*q) <= tol) return "poissonian";
  return *q < 0.0 ? "sub-poissonian" : "super-poissonian";
}

}  // namespace curvpdc::obs
