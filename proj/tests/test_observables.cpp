#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "curvpdc/observables.hpp"
#include "curvpdc/pdc.hpp"
#include "curvpdc/scs.hpp"
#include "doctest.h"

using namespace curvpdc;
using namespace curvpdc::obs;
using fock::TwoModeState;

namespace {

TwoModeState binomial_state() { return scs::build_scs({0.0, 4, {1.0, 0.0}}); }

TwoModeState bell_state() {
  const double h = 1.0 / std::sqrt(2.0);
  return TwoModeState::from_entries(1, 1, {{{0, 1}, {h, 0}}, {{1, 0}, {h, 0}}});
}

TwoModeState closed_form_squeezed_vacuum(double r, int cutoff) {
  std::vector<fock::Entry> entries;
  for (int n = 0; n <= cutoff; ++n) entries.push_back({{n, n}, std::pow(std::tanh(r), n) / std::cosh(r)});
  return fock::normalize(TwoModeState::from_entries(cutoff, cutoff, std::move(entries)));
}

}  // namespace

TEST_CASE("reduced density matrices") {
  auto rho = reduced_density(fock::basis_state(2, 1, 3, 3), Mode::signal);
  CHECK(rho.dimension() == 4);
  CHECK(rho(2, 2) == Complex{1.0, 0.0});
  CHECK(rho.entries.nonZeros() == 1);

  auto bell = reduced_density(bell_state(), Mode::signal);
  CHECK(std::abs(bell(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(bell(1, 1) - 0.5) < 1e-15);
  CHECK(bell(0, 1) == Complex{});

  auto bin = reduced_density(binomial_state(), Mode::idler);
  for (int m = 0; m <= 4; ++m) {
    CHECK(std::abs(bin(m, m) - scs::binomial(4, m) / 16.0) < 1e-15);
    for (int k = 0; k <= 4; ++k)
      if (k != m) CHECK(bin(m, k) == Complex{});
  }

  CHECK_THROWS_AS(reduced_density(fock::basis_state(0, 0, 1, 1).scaled(2.0), Mode::signal), InvalidArgument);
}

TEST_CASE("reduced density of an evolved state is a valid density matrix") {
  const auto out = pdc::evolve_analytic(scs::SCSParams{1.0, 3, {0.8, 0.3}}, pdc::make_params(0.6, 1.0),
                                        {1e-12, 2000});
  for (Mode mode : {Mode::signal, Mode::idler}) {
    const auto rho = reduced_density(out.state, mode);
    const Eigen::MatrixXcd dense(rho.entries);
    CHECK((dense - dense.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("linear entropy") {
  CHECK(linear_entropy(reduced_density(fock::basis_state(2, 1, 3, 3), Mode::signal)) == 0.0);
  CHECK(linear_entropy(reduced_density(bell_state(), Mode::signal)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(linear_entropy(reduced_density(binomial_state(), Mode::signal)) - 0.7265625) < 1e-15);
}

TEST_CASE("mean photon numbers") {
  CHECK(mean_photon(fock::basis_state(0, 4, 4, 4), Mode::signal) == 0.0);
  CHECK(mean_photon(fock::basis_state(0, 4, 4, 4), Mode::idler) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(std::abs(mean_photon(binomial_state(), Mode::signal) - 2.0) < 1e-14);
  CHECK(std::abs(mean_photon(binomial_state(), Mode::idler) - 2.0) < 1e-14);
  const double r = 0.7;
  const auto tmsv = closed_form_squeezed_vacuum(r, 200);
  CHECK(std::abs(mean_photon(tmsv, Mode::signal) - std::pow(std::sinh(r), 2)) < 1e-12);
  CHECK(std::abs(mean_photon(tmsv, Mode::idler) - std::pow(std::sinh(r), 2)) < 1e-12);
}

TEST_CASE("Mandel Q") {
  CHECK_FALSE(mandel_q(fock::basis_state(0, 4, 4, 4), Mode::signal).has_value());
  CHECK(std::abs(*mandel_q(binomial_state(), Mode::signal) + 0.5) < 1e-14);
  for (int n = 1; n <= 5; ++n) CHECK(std::abs(*mandel_q(fock::basis_state(n, 2, 5, 5), Mode::signal) + 1.0) < 1e-14);
  const double r = 0.7;
  // Thermal marginal: Q = <n> = sinh^2 r.
  CHECK(std::abs(*mandel_q(closed_form_squeezed_vacuum(r, 200), Mode::idler) - std::pow(std::sinh(r), 2)) < 1e-11);
}

TEST_CASE("cross correlation") {
  CHECK(std::abs(*cross_correlation(fock::basis_state(2, 3, 5, 5)) - 1.0) < 1e-15);
  CHECK(std::abs(*cross_correlation(binomial_state()) - 0.75) < 1e-14);
  CHECK_FALSE(cross_correlation(fock::basis_state(0, 3, 5, 5)).has_value());
  for (double r : {0.3, 1.0}) {
    const double expected = 2.0 + 1.0 / std::pow(std::sinh(r), 2);
    CHECK(std::abs(*cross_correlation(closed_form_squeezed_vacuum(r, 300)) - expected) < 1e-9);
  }
}

TEST_CASE("joint distribution") {
  const auto single = joint_distribution(fock::basis_state(2, 1, 3, 3));
  CHECK(single(2, 1) == 1.0);
  CHECK(single.support().size() == 1);
  CHECK(single(0, 0) == 0.0);

  const auto bin = joint_distribution(binomial_state());
  for (int m = 0; m <= 4; ++m) CHECK(std::abs(bin(m, 4 - m) - scs::binomial(4, m) / 16.0) < 1e-15);
  CHECK(std::abs(bin.total() - 1.0) < 1e-14);

  const auto out = pdc::evolve_analytic(scs::SCSParams{10.0, 4, {1.0, 0.0}}, pdc::make_params(0.1, 0.0),
                                        {1e-12, 2000});
  const auto p = joint_distribution(out.state);
  CHECK(std::abs(p.total() - 1.0) < 1e-10);
  for (const auto& [index, value] : p.support()) {
    if (!(index == fock::FockIndex{4, 0})) CHECK(value < p(4, 0));
  }
  CHECK(std::abs(p.marginal_mean(Mode::signal) - mean_photon(out.state, Mode::signal)) < 1e-12);
  CHECK(std::abs(p.marginal_mean(Mode::idler) - mean_photon(out.state, Mode::idler)) < 1e-12);
}

TEST_CASE("measure and statistics classification") {
  const auto rep = measure(binomial_state(), 0.0);
  CHECK(rep.S == doctest::Approx(0.7265625));
  CHECK(rep.joint.has_value());
  CHECK_FALSE(measure(binomial_state(), 0.0, false).joint.has_value());
  CHECK(classify_statistics(-0.5) == "sub-poissonian");
  CHECK(classify_statistics(0.2) == "super-poissonian");
  CHECK(classify_statistics(1e-12) == "poissonian");
  CHECK(classify_statistics(std::nullopt) == "undefined");
}

TEST_CASE("signal and idler entropies agree for pure states") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const auto out = pdc::evolve_analytic(scs::SCSParams{5 * u(rng), 1 + k % 6, std::polar(2 * u(rng), 6 * u(rng))},
                                          pdc::make_params(u(rng), 6 * u(rng)), {1e-12, 2000});
    CHECK(std::abs(linear_entropy(reduced_density(out.state, Mode::signal)) -
                   linear_entropy(reduced_density(out.state, Mode::idler))) < 1e-10);
  }
}
