// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "curvpdc/algebra.hpp"
#include "curvpdc/expm.hpp"
#include "curvpdc/observables.hpp"
#include "curvpdc/pdc.hpp"
#include "curvpdc/scs.hpp"

using namespace curvpdc;
using fock::TwoModeState;

namespace {

const pdc::TruncationPolicy kPolicy{1e-12, 20000};

struct Outcome {
  bool pass;
  std::string detail;
};

obs::ObservableReport observe(double lambda, int M, Complex z, double r, double theta = 0.0,
                              bool with_joint = false) {
  const auto out = pdc::evolve_analytic(scs::SCSParams{lambda, M, z}, pdc::make_params(r, theta), kPolicy);
  return obs::measure(out.state, out.leakage, with_joint);
}

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = k == n - 1 ? b : a + (b - a) * k / (n - 1);
  return v;
}

struct Point {
  double lambda;
  int M;
  double z;
  double r;
  double theta;
};

std::vector<Point> acceptance_points() {
  std::vector<Point> pts;
  for (double l : {0.0, 0.5, 1.0, 5.0})
    for (int M = 1; M <= 6; ++M)
      for (double z : {0.5, 1.0, 2.0})
        for (double r : {0.1, 0.5, 1.0})
          for (double th : {0.0, std::numbers::pi / 3}) pts.push_back({l, M, z, r, th});
  return pts;
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  const auto pts = acceptance_points();
  std::map<std::tuple<int, double, double>, std::vector<const Point*>> by_pump;
  for (const auto& p : pts) by_pump[{p.M, p.r, p.theta}].push_back(&p);
  double worst = 0.0;
  for (const auto& [key, members] : by_pump) {
    std::vector<TwoModeState> seeds;
    for (const auto* p : members) seeds.push_back(scs::build_scs({p->lambda, p->M, {p->z, 0.0}}));
    const auto pump = pdc::make_params(std::get<1>(key), std::get<2>(key));
    const auto numeric = pdc::evolve_numeric_converged(seeds, pump, 1e-10);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const auto* p = members[k];
      const auto a = pdc::evolve_analytic(scs::SCSParams{p->lambda, p->M, {p->z, 0.0}}, pump, kPolicy);
      worst = std::max(worst, 1.0 - fock::fidelity(a.state, numeric[k].state));
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-8 && seconds < 60.0,
          fmt::format("{} points, min fidelity 1 - {:.2e}, {:.1f} s", pts.size(), worst, seconds)};
}

Outcome criterion2() {
  const auto rep = observe(0.0, 4, {1.0, 0.0}, 0.0);
  const std::vector<std::pair<double, double>> pairs = {
      {rep.S, 0.7265625}, {rep.ns, 2.0}, {rep.ni, 2.0}, {rep.Qs.value_or(NAN), -0.5},
      {rep.Qi.value_or(NAN), -0.5}, {rep.g2.value_or(NAN), 0.75}};
  double worst = 0.0;
  for (const auto& [got, want] : pairs) worst = std::max(worst, std::isnan(got) ? INFINITY : std::abs(got - want));
  return {worst <= 1e-10, fmt::format("S={:.10f} ns={:.10f} ni={:.10f} Qs={:.10f} Qi={:.10f} g2={:.10f}", rep.S,
                                      rep.ns, rep.ni, rep.Qs.value_or(NAN), rep.Qi.value_or(NAN),
                                      rep.g2.value_or(NAN))};
}

Outcome criterion3() {
  double fid_gap = 0.0;
  double identity_gap = 0.0;
  double schwinger_gap = 0.0;
  for (int M = 1; M <= 6; ++M) {
    for (Complex z : {Complex{0.5, 0.0}, Complex{1.0, 0.0}, Complex{2.0, -1.0}}) {
      std::vector<fock::Entry> entries;
      for (int m = 0; m <= M; ++m) entries.push_back({{m, M - m}, std::sqrt(scs::binomial(M, m)) * std::pow(z, m)});
      const auto binomial = fock::normalize(TwoModeState::from_entries(M, M, entries));
      const auto scs_state = scs::build_scs({1e-10, M, z});
      fid_gap = std::max(fid_gap, 1.0 - fock::fidelity(scs_state, binomial));

      for (double l : {0.0, 2.0}) {
        const auto seed = scs::build_scs({l, M, z});
        const auto out = pdc::evolve_analytic(scs::SCSParams{l, M, z}, pdc::make_params(0.0, 0.0), kPolicy);
        for (const auto& e : seed.entries()) {
          identity_gap = std::max(identity_gap, std::abs(e.amplitude - out.state.amplitude(e.index)));
        }
        identity_gap = std::max(identity_gap, std::abs(out.state.norm_squared() - seed.norm_squared()));
      }
    }
    const auto g = algebra::build_generators(algebra::make_params(0.0, M));
    Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(M + 1, M + 1);
    Eigen::MatrixXcd j0 = Eigen::MatrixXcd::Zero(M + 1, M + 1);
    for (int m = 0; m <= M; ++m) {
      j0(m, m) = (m - (M - m)) / 2.0;
      if (m < M) jp(m + 1, m) = std::sqrt((m + 1.0) * (M - m));
    }
    schwinger_gap = std::max({schwinger_gap, linalg::max_abs(g.j_plus - jp), linalg::max_abs(g.j_minus - jp.adjoint()),
                              linalg::max_abs(g.j_zero - j0)});
  }
  return {fid_gap <= 1e-8 && identity_gap <= 1e-12 && schwinger_gap <= 1e-12,
          fmt::format("flat-limit 1-fidelity {:.2e}, r=0 change {:.2e}, Schwinger deviation {:.2e}", fid_gap,
                      identity_gap, schwinger_gap)};
}

Outcome criterion4() {
  double shift = 0.0;
  double jpm_max = 0.0;
  for (double l : {0.0, 0.5, 1.0, 5.0}) {
    for (int M = 1; M <= 6; ++M) {
      const auto g = algebra::build_generators(algebra::make_params(l, M));
      const Eigen::MatrixXcd c_plus = g.j_zero * g.j_plus - g.j_plus * g.j_zero - g.j_plus;
      const Eigen::MatrixXcd c_minus = g.j_zero * g.j_minus - g.j_minus * g.j_zero + g.j_minus;
      shift = std::max({shift, linalg::max_abs(c_plus), linalg::max_abs(c_minus)});
      jpm_max = std::max(jpm_max, algebra::commutator_report(algebra::make_params(l, M)).res_jpm);
    }
  }
  const auto su11 = pdc::su11_commutator_check(12);
  const double interior = std::max(su11.interior_res_pm, su11.interior_res_0p);
  return {shift <= 1e-12 && interior <= 1e-12,
          fmt::format("[J0,J+-] residual {:.2e}, su(1,1) interior residual {:.2e} at cutoff 12, "
                      "[J+,J-]-2J0h residual (reported) {:.3e}",
                      shift, interior, jpm_max)};
}

std::vector<double> entropy_along(const std::vector<double>& xs, const std::function<double(double)>& s_of) {
  std::vector<double> out;
  for (double x : xs) out.push_back(s_of(x));
  return out;
}

Outcome criterion5() {
  const auto lambdas = grid(0.0, 10.0, 101);
  std::map<double, std::vector<double>> s;
  for (double r : {0.1, 0.5, 1.0}) {
    s[r] = entropy_along(lambdas, [r](double l) { return observe(l, 4, {1.0, 0.0}, r).S; });
  }
  double worst_rise = 0.0;
  for (std::size_t k = 1; k < lambdas.size(); ++k) worst_rise = std::max(worst_rise, s[0.1][k] - s[0.1][k - 1]);
  int misordered = 0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(s[1.0][k] > s[0.5][k] && s[0.5][k] > s[0.1][k])) ++misordered;
  }
  return {worst_rise <= 1e-9 && misordered == 0,
          fmt::format("largest step increase {:.2e}, points out of order {}", worst_rise, misordered)};
}

Outcome criterion6() {
  const auto rs = grid(0.0, 3.0, 101);
  std::string detail;
  bool monotone = true;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (double l : {0.0, 0.5, 1.0}) {
    const auto s = entropy_along(rs, [l](double r) { return observe(l, 4, {1.0, 0.0}, r).S; });
    double drop = 0.0;
    double at = 0.0;
    for (std::size_t k = 1; k < s.size(); ++k) {
      if (s[k - 1] - s[k] > drop) {
        drop = s[k - 1] - s[k];
        at = rs[k];
      }
    }
    monotone = monotone && drop <= 1e-9;
    lo = std::min(lo, s.back());
    hi = std::max(hi, s.back());
    detail += fmt::format("lambda={} max decrease {:.2e} (r={:.2f}); ", l, drop, at);
  }
  detail += fmt::format("spread at r=3 {:.2e}", hi - lo);
  return {monotone && hi - lo <= 0.02, detail};
}

Outcome criterion7() {
  const auto zs = grid(0.0, 3.0, 301);
  auto peak = [&zs](double l) {
    const auto s = entropy_along(zs, [l](double z) { return observe(l, 4, {z, 0.0}, 0.5).S; });
    return zs[std::max_element(s.begin(), s.end()) - s.begin()];
  };
  const double flat = peak(0.0);
  const double curved = peak(1.0);
  return {flat >= 0.8 && flat <= 1.2 && curved < flat,
          fmt::format("argmax z at lambda=0: {:.2f}, at lambda=1: {:.2f}", flat, curved)};
}

Outcome criterion8() {
  const auto p0 = *observe(0.0, 4, {1.0, 0.0}, 0.1, 0.0, true).joint;
  const auto p10 = *observe(10.0, 4, {1.0, 0.0}, 0.1, 0.0, true).joint;
  const double top = p10(4, 0);
  bool unique = true;
  for (const auto& [idx, p] : p10.support()) {
    if (!(idx == fock::FockIndex{4, 0}) && p >= top) unique = false;
  }
  int stated = 0;
  int dropped = 0;
  for (const auto& [idx, p] : p0.support()) {
    if (idx == fock::FockIndex{4, 0} || p < 0.005) continue;
    ++stated;
    if (p10(idx.n_s, idx.n_i) < p) ++dropped;
  }
  return {unique && dropped == stated,
          fmt::format("P[4,0]={:.4f} unique max: {}; {}/{} entries with P(lambda=0) >= 0.005 decreased", top,
                      unique ? "yes" : "no", dropped, stated)};
}

Outcome criterion9() {
  const auto lambdas = grid(0.0, 10.0, 61);
  double max_r0 = -INFINITY;
  double min_z0 = INFINITY;
  for (double l : lambdas) {
    if (auto g = observe(l, 4, {1.0, 0.0}, 0.0).g2) max_r0 = std::max(max_r0, *g);
    if (auto g = observe(l, 4, {0.0, 0.0}, 0.5).g2) min_z0 = std::min(min_z0, *g);
  }
  return {max_r0 < 1.0 && min_z0 > 1.0,
          fmt::format("max g2 on r=0 edge {:.4f}, min g2 on z=0 edge {:.4f}", max_r0, min_z0)};
}

Outcome criterion10() {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double l = 10 * u(rng);
    const int M = 1 + static_cast<int>(u(rng) * 6) % 6;
    const double zr = 3 * u(rng) - 1.5;
    const double zi = 3 * u(rng) - 1.5;
    const double r = 2 * u(rng);
    const double th = 2 * std::numbers::pi * u(rng);
    const auto out = pdc::evolve_analytic(scs::SCSParams{l, M, {zr, zi}}, pdc::make_params(r, th), kPolicy);
    const double ss = obs::linear_entropy(obs::reduced_density(out.state, Mode::signal));
    const double si = obs::linear_entropy(obs::reduced_density(out.state, Mode::idler));
    worst = std::max(worst, std::abs(ss - si));
  }
  return {worst <= 1e-10, fmt::format("max |S_s - S_i| over 100 points {:.2e}", worst)};
}

Outcome criterion11() {
  double worst = 0.0;
  const pdc::TruncationPolicy policy{1e-12, 200};
  for (const auto& p : acceptance_points()) {
    const auto coeffs = scs::scs_coefficients({p.lambda, p.M, {p.z, 0.0}});
    const auto pump = pdc::make_params(p.r, p.theta);
    const auto base = pdc::evolve_analytic(coeffs, pump, policy);
    const auto doubled = pdc::evolve_analytic_at(coeffs, pump, 2 * base.cutoff);
    const auto a = obs::measure(base.state, base.leakage, false);
    const auto b = obs::measure(doubled.state, doubled.leakage, false);
    auto gap = [](std::optional<double> x, std::optional<double> y) {
      if (x.has_value() != y.has_value()) return static_cast<double>(INFINITY);
      return x ? std::abs(*x - *y) : 0.0;
    };
    worst = std::max({worst, std::abs(a.S - b.S), std::abs(a.ns - b.ns), std::abs(a.ni - b.ni), gap(a.Qs, b.Qs),
                      gap(a.Qi, b.Qi), gap(a.g2, b.g2)});
  }
  return {worst < 1e-8, fmt::format("largest observable change on doubling {:.2e}", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", criterion1},      {"exact scalars", criterion2},
      {"flat and identity limits", criterion3}, {"algebra residuals", criterion4},
      {"entropy falls with curvature", criterion5}, {"entropy rises with squeezing", criterion6},
      {"entropy peak near z = 1", criterion7},  {"joint probabilities at large curvature", criterion8},
      {"correlation anchors", criterion9},     {"signal/idler entropy symmetry", criterion10},
      {"truncation robustness", criterion11},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("raised: {}", e.what())};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
