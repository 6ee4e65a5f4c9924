#include "curvpdc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <tuple>

#include <fmt/format.h>

#include "curvpdc/algebra.hpp"
#include "curvpdc/expm.hpp"
#include "curvpdc/figures.hpp"
#include "curvpdc/observables.hpp"
#include "curvpdc/sweep.hpp"
#include "json.hpp"

namespace curvpdc::sweep {

namespace {

using fock::TwoModeState;

struct Tolerances {
  double fidelity_deficit;
  double step;
  double doubling;

  explicit Tolerances(double tail_tol)
      : fidelity_deficit(std::max(1e-8, 10.0 * tail_tol)),
        step(std::max(1e-9, 10.0 * tail_tol)),
        doubling(std::max(1e-8, 100.0 * tail_tol)) {}
};

struct Context {
  const VerifyOptions& options;
  Tolerances tol;
  pdc::TruncationPolicy figure_policy;
};

// Direct evaluation of the sphere coherent state, written independently of
// the scs module so the oracle side shares no code with the analytic side.
TwoModeState reference_seed(double lambda, int M, Complex z) {
  const long double s = std::sqrt(1.0L + static_cast<long double>(lambda) * lambda / 4.0L);
  std::vector<std::complex<long double>> amp(M + 1);
  long double g_fact = 1.0L;
  long double choose = 1.0L;
  long double total = 0.0L;
  for (int m = 0; m <= M; ++m) {
    if (m > 0) {
      g_fact *= std::sqrt(lambda * (M + 1.0L - m) + s) * std::sqrt(lambda * static_cast<long double>(m) + s);
      choose = choose * (M - m + 1) / m;
    }
    amp[m] = std::sqrt(choose) * g_fact * std::pow(std::complex<long double>(z.real(), z.imag()), m);
    total += std::norm(amp[m]);
  }
  std::vector<fock::Entry> entries;
  for (int m = 0; m <= M; ++m) {
    const auto a = amp[m] / std::sqrt(total);
    entries.push_back({{m, M - m}, Complex{static_cast<double>(a.real()), static_cast<double>(a.imag())}});
  }
  return TwoModeState::from_entries(M, M, std::move(entries));
}

pdc::Evolution analytic(const Context& ctx, double lambda, int M, Complex z, double r, double theta,
                        const pdc::TruncationPolicy& policy) {
  const auto coeffs = scs::scs_coefficients({lambda, M, z}, ctx.options.deformation);
  return pdc::evolve_analytic(coeffs, pdc::make_params(r, theta), policy);
}

obs::ObservableReport analytic_report(const Context& ctx, double lambda, int M, Complex z, double r,
                                      const pdc::TruncationPolicy& policy, bool with_joint = false) {
  const auto evo = analytic(ctx, lambda, M, z, r, 0.0, policy);
  return obs::measure(evo.state, evo.leakage, with_joint);
}

std::vector<double> linspace(double a, double b, int n) { return Axis{Param::lambda, a, b, n}.values(); }

struct GridPoint {
  double lambda;
  int M;
  double z;
  double r;
  double theta;
};

std::vector<GridPoint> acceptance_grid(bool reduced) {
  std::vector<double> lambdas = {0.0, 0.5, 1.0, 5.0};
  std::vector<int> ms = {1, 2, 3, 4, 5, 6};
  std::vector<double> zs = {0.5, 1.0, 2.0};
  std::vector<double> rs = {0.1, 0.5, 1.0};
  if (reduced) {
    lambdas = {0.0, 1.0};
    ms = {1, 2, 3};
    zs = {1.0};
    rs = {0.1, 0.5};
  }
  std::vector<GridPoint> grid;
  for (double l : lambdas)
    for (int M : ms)
      for (double z : zs)
        for (double r : rs)
          for (double th : {0.0, std::numbers::pi / 3.0}) grid.push_back({l, M, z, r, th});
  return grid;
}

CheckResult check_algebra_flat(const Context&) {
  double worst = 0.0;
  for (int M = 1; M <= 6; ++M) {
    const auto p = algebra::make_params(0.0, M);
    const auto g = algebra::build_generators(p);
    Eigen::MatrixXcd schwinger = Eigen::MatrixXcd::Zero(M + 1, M + 1);
    for (int m = 0; m < M; ++m) schwinger(m + 1, m) = std::sqrt(static_cast<double>(m + 1) * (M - m));
    const auto rep = algebra::commutator_report(p);
    worst = std::max({worst, linalg::max_abs(g.j_plus - schwinger), linalg::max_abs(g.j_minus - schwinger.adjoint()),
                      rep.res_j0_jplus, rep.res_j0_jminus, rep.res_jpm});
  }
  return {"algebra_flat_limit", worst <= 1e-12, false, fmt::format("max deviation {:.3e} (bound 1e-12)", worst)};
}

CheckResult check_algebra_shift(const Context&) {
  double worst = 0.0;
  for (double l : {0.0, 0.5, 1.0, 5.0}) {
    for (int M = 1; M <= 6; ++M) {
      const auto rep = algebra::commutator_report(algebra::make_params(l, M));
      worst = std::max({worst, rep.res_j0_jplus, rep.res_j0_jminus});
    }
  }
  return {"algebra_shift_relations", worst <= 1e-12, false, fmt::format("max residual {:.3e} (bound 1e-12)", worst)};
}

CheckResult check_algebra_jpm(const Context&) {
  std::string detail;
  for (double l : {0.5, 1.0, 5.0}) {
    double worst = 0.0;
    for (int M = 1; M <= 6; ++M) worst = std::max(worst, algebra::commutator_report(algebra::make_params(l, M)).res_jpm);
    detail += fmt::format("{}lambda={}: {:.6g}", detail.empty() ? "" : "; ", l, worst);
  }
  return {"algebra_jpm_residual", true, true, "max |[J+,J-] - 2 J0 h| over M=1..6 with N=M: " + detail};
}

CheckResult check_su11(const Context&) {
  const auto rep = pdc::su11_commutator_check(12);
  const double worst = std::max(rep.interior_res_pm, rep.interior_res_0p);
  return {"su11_interior", worst <= 1e-12, false,
          fmt::format("interior residual {:.3e}, full-space residual {:.3e} (truncation edge)", worst,
                      std::max(rep.full_res_pm, rep.full_res_0p))};
}

CheckResult check_oracle(const Context& ctx) {
  const auto grid = acceptance_grid(ctx.options.reduced_grid);
  // Points sharing (M, r, theta) share one set of sector exponentials.
  std::map<std::tuple<int, double, double>, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < grid.size(); ++k) groups[{grid[k].M, grid[k].r, grid[k].theta}].push_back(k);
  std::vector<std::vector<std::size_t>> batches;
  for (auto& [key, members] : groups) batches.push_back(std::move(members));

  std::vector<double> deficit(grid.size(), 0.0);
  parallel_for(batches.size(), ctx.options.threads, [&](std::size_t b) {
    const auto& members = batches[b];
    const auto& first = grid[members.front()];
    const auto pdc = pdc::make_params(first.r, first.theta);
    std::vector<TwoModeState> seeds;
    for (std::size_t k : members) seeds.push_back(reference_seed(grid[k].lambda, grid[k].M, {grid[k].z, 0.0}));
    const auto numeric = pdc::evolve_numeric_converged(seeds, pdc, 1e-10);
    for (std::size_t j = 0; j < members.size(); ++j) {
      const auto& g = grid[members[j]];
      const auto a = analytic(ctx, g.lambda, g.M, {g.z, 0.0}, g.r, g.theta, ctx.options.policy);
      deficit[members[j]] = 1.0 - fock::fidelity(a.state, numeric[j].state);
    }
  });
  const auto worst = std::max_element(deficit.begin(), deficit.end());
  const auto& g = grid[worst - deficit.begin()];
  return {"oracle_equivalence", *worst <= ctx.tol.fidelity_deficit, false,
          fmt::format("{} points, worst 1-fidelity {:.3e} at lambda={} M={} z={} r={} theta={:.4f} (bound {:.1e})",
                      grid.size(), *worst, g.lambda, g.M, g.z, g.r, g.theta, ctx.tol.fidelity_deficit)};
}

CheckResult check_flat_scs(const Context&) {
  double worst = 0.0;
  for (int M = 1; M <= 6; ++M) {
    for (Complex z : {Complex{0.5, 0}, Complex{1, 0}, Complex{2, 0}, Complex{1, 1}}) {
      const auto scs_state = scs::build_scs({1e-10, M, z});
      std::vector<fock::Entry> entries;
      const double norm = std::pow(1.0 + std::norm(z), M / 2.0);
      for (int m = 0; m <= M; ++m) entries.push_back({{m, M - m}, std::sqrt(scs::binomial(M, m)) * std::pow(z, m) / norm});
      const auto binomial_state = TwoModeState::from_entries(M, M, std::move(entries));
      worst = std::max(worst, 1.0 - fock::fidelity(scs_state, binomial_state));
    }
  }
  return {"flat_limit_scs", worst <= 1e-8, false, fmt::format("worst 1-fidelity {:.3e} (bound 1e-8)", worst)};
}

double max_amplitude_gap(const TwoModeState& a, const TwoModeState& b) {
  double worst = 0.0;
  for (const auto& e : a.entries()) worst = std::max(worst, std::abs(e.amplitude - b.amplitude(e.index)));
  for (const auto& e : b.entries()) worst = std::max(worst, std::abs(e.amplitude - a.amplitude(e.index)));
  return worst;
}

CheckResult check_identity(const Context& ctx) {
  double worst = 0.0;
  const auto zero = pdc::make_params(0.0, 0.0);
  for (double l : {0.0, 1.0, 5.0}) {
    for (int M = 1; M <= 6; ++M) {
      const auto seed = scs::build_scs({l, M, {1.0, 0.5}});
      const auto a = pdc::evolve_analytic(scs::SCSParams{l, M, {1.0, 0.5}}, zero, ctx.options.policy);
      const auto n = pdc::evolve_numeric(seed, zero, M + 4);
      worst = std::max({worst, max_amplitude_gap(seed, a.state), max_amplitude_gap(seed, n.state)});
    }
  }
  return {"identity_evolution", worst <= 1e-12, false, fmt::format("max amplitude change {:.3e} (bound 1e-12)", worst)};
}

CheckResult check_scalars(const Context& ctx) {
  const auto rep = analytic_report(ctx, 0.0, 4, {1.0, 0.0}, 0.0, ctx.options.policy);
  auto gap = [](std::optional<double> v, double expected) { return v ? std::abs(*v - expected) : 1.0; };
  const double worst = std::max({std::abs(rep.S - 0.7265625), std::abs(rep.ns - 2.0), std::abs(rep.ni - 2.0),
                                 gap(rep.Qs, -0.5), gap(rep.Qi, -0.5), gap(rep.g2, 0.75)});
  return {"binomial_scalars", worst <= 1e-10, false,
          fmt::format("S={:.12g} ns={:.12g} ni={:.12g} Qs={:.12g} Qi={:.12g} g2={:.12g}; max gap {:.3e}", rep.S,
                      rep.ns, rep.ni, rep.Qs.value_or(NAN), rep.Qi.value_or(NAN), rep.g2.value_or(NAN), worst)};
}

std::vector<double> entropy_curve(const Context& ctx, const std::vector<double>& xs,
                                  const std::function<obs::ObservableReport(double)>& eval) {
  std::vector<double> s(xs.size());
  parallel_for(xs.size(), ctx.options.threads, [&](std::size_t k) { s[k] = eval(xs[k]).S; });
  return s;
}

CheckResult check_fig1(const Context& ctx) {
  const auto lambdas = linspace(0.0, 10.0, 101);
  std::map<double, std::vector<double>> curves;
  for (double r : {0.1, 0.5, 1.0}) {
    curves[r] = entropy_curve(ctx, lambdas, [&](double l) {
      return analytic_report(ctx, l, 4, {1.0, 0.0}, r, ctx.figure_policy);
    });
  }
  double worst_rise = -INFINITY;
  for (std::size_t k = 1; k < lambdas.size(); ++k) worst_rise = std::max(worst_rise, curves[0.1][k] - curves[0.1][k - 1]);
  bool ordered = true;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    ordered = ordered && curves[1.0][k] > curves[0.5][k] && curves[0.5][k] > curves[0.1][k];
  }
  return {"fig1_entropy_vs_lambda", worst_rise <= ctx.tol.step && ordered, false,
          fmt::format("r=0.1 largest step increase {:.3e} (tolerance {:.1e}); S(1)>S(0.5)>S(0.1) pointwise: {}",
                      worst_rise, ctx.tol.step, ordered)};
}

std::map<double, std::vector<double>> fig2_curves(const Context& ctx, const std::vector<double>& rs) {
  std::map<double, std::vector<double>> curves;
  for (double l : {0.0, 0.5, 1.0}) {
    curves[l] = entropy_curve(ctx, rs, [&](double r) {
      return analytic_report(ctx, l, 4, {1.0, 0.0}, r, ctx.figure_policy);
    });
  }
  return curves;
}

CheckResult check_fig2_monotone(const Context& ctx) {
  const auto rs = linspace(0.0, 3.0, 101);
  const auto curves = fig2_curves(ctx, rs);
  std::string detail;
  bool ok = true;
  for (const auto& [l, s] : curves) {
    double worst_drop = 0.0;
    double at = 0.0;
    for (std::size_t k = 1; k < s.size(); ++k) {
      if (s[k - 1] - s[k] > worst_drop) {
        worst_drop = s[k - 1] - s[k];
        at = rs[k];
      }
    }
    ok = ok && worst_drop <= ctx.tol.step;
    detail += fmt::format("{}lambda={}: largest decrease {:.3e} at r={:.2f}", detail.empty() ? "" : "; ", l, worst_drop, at);
  }
  return {"fig2_entropy_vs_r_monotone", ok, false, detail};
}

CheckResult check_fig2_limit(const Context& ctx) {
  double lo = INFINITY;
  double hi = -INFINITY;
  for (double l : {0.0, 0.5, 1.0}) {
    const double s = analytic_report(ctx, l, 4, {1.0, 0.0}, 3.0, ctx.figure_policy).S;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {"fig2_entropy_limit", hi - lo <= 0.02, false,
          fmt::format("S at r=3 spans [{:.6f}, {:.6f}], spread {:.3e} (bound 0.02)", lo, hi, hi - lo)};
}

CheckResult check_fig3(const Context& ctx) {
  const auto zs = linspace(0.0, 3.0, 101);
  auto argmax = [&](double l) {
    const auto s = entropy_curve(ctx, zs, [&](double z) {
      return analytic_report(ctx, l, 4, {z, 0.0}, 0.5, ctx.figure_policy);
    });
    return zs[std::max_element(s.begin(), s.end()) - s.begin()];
  };
  const double flat = argmax(0.0);
  const double curved = argmax(1.0);
  return {"fig3_entropy_peak", flat >= 0.8 && flat <= 1.2 && curved < flat, false,
          fmt::format("argmax z: lambda=0 -> {:.2f} (window [0.8, 1.2]), lambda=1 -> {:.2f}", flat, curved)};
}

CheckResult check_fig4(const Context& ctx) {
  const auto flat = *analytic_report(ctx, 0.0, 4, {1.0, 0.0}, 0.1, ctx.figure_policy, true).joint;
  const auto curved = *analytic_report(ctx, 10.0, 4, {1.0, 0.0}, 0.1, ctx.figure_policy, true).joint;
  const double p40 = curved(4, 0);
  bool unique_max = true;
  for (const auto& [index, p] : curved.support()) {
    if (!(index == fock::FockIndex{4, 0}) && p >= p40) unique_max = false;
  }
  // The plotted entries are the substantial ones at lambda = 0.
  bool all_drop = true;
  int plotted = 0;
  for (const auto& [index, p] : flat.support()) {
    if (p < 0.005 || index == fock::FockIndex{4, 0}) continue;
    ++plotted;
    if (!(curved(index.n_s, index.n_i) < p)) all_drop = false;
  }
  return {"fig4_joint_probabilities", unique_max && all_drop, false,
          fmt::format("P[4,0](lambda=10)={:.6f} unique max: {}; {} other entries with P>=0.005 at lambda=0 all lower "
                      "at lambda=10: {}",
                      p40, unique_max, plotted, all_drop)};
}

CheckResult check_fig7(const Context& ctx) {
  const auto lambdas = linspace(0.0, 10.0, 61);
  double worst_r0 = -INFINITY;
  double worst_z0 = INFINITY;
  int undefined = 0;
  for (double l : lambdas) {
    const auto at_r0 = analytic_report(ctx, l, 4, {1.0, 0.0}, 0.0, ctx.figure_policy);
    const auto at_z0 = analytic_report(ctx, l, 4, {0.0, 0.0}, 0.5, ctx.figure_policy);
    if (at_r0.g2) worst_r0 = std::max(worst_r0, *at_r0.g2); else ++undefined;
    if (at_z0.g2) worst_z0 = std::min(worst_z0, *at_z0.g2); else ++undefined;
  }
  return {"fig7_correlation_anchors", worst_r0 < 1.0 && worst_z0 > 1.0, false,
          fmt::format("max g2 on r=0 edge {:.6f} (< 1), min g2 on z=0 edge {:.6f} (> 1), undefined cells {}", worst_r0,
                      worst_z0, undefined)};
}

CheckResult check_schmidt(const Context& ctx) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double l = 10.0 * unit(rng);
    const int M = 1 + static_cast<int>(6 * unit(rng)) % 6;
    const Complex z = std::polar(2.0 * unit(rng), 2.0 * std::numbers::pi * unit(rng));
    const double r = 1.5 * unit(rng);
    const double th = 2.0 * std::numbers::pi * unit(rng);
    const auto coeffs = scs::scs_coefficients({l, M, z}, ctx.options.deformation);
    const auto evo = pdc::evolve_analytic(coeffs, pdc::make_params(r, th), ctx.figure_policy);
    const double s = obs::linear_entropy(obs::reduced_density(evo.state, Mode::signal));
    const double i = obs::linear_entropy(obs::reduced_density(evo.state, Mode::idler));
    worst = std::max(worst, std::abs(s - i));
  }
  return {"schmidt_symmetry", worst <= 1e-10, false, fmt::format("max |S_s - S_i| {:.3e} over 100 points", worst)};
}

CheckResult check_doubling(const Context& ctx) {
  const auto grid = acceptance_grid(ctx.options.reduced_grid);
  std::vector<double> change(grid.size(), 0.0);
  parallel_for(grid.size(), ctx.options.threads, [&](std::size_t k) {
    const auto& g = grid[k];
    const auto coeffs = scs::scs_coefficients({g.lambda, g.M, {g.z, 0.0}}, ctx.options.deformation);
    const auto pdc = pdc::make_params(g.r, g.theta);
    const auto base = pdc::evolve_analytic(coeffs, pdc, ctx.options.policy);
    const auto twice = pdc::evolve_analytic_at(coeffs, pdc, 2 * base.cutoff);
    const auto a = obs::measure(base.state, base.leakage, false);
    const auto b = obs::measure(twice.state, twice.leakage, false);
    auto diff = [](std::optional<double> x, std::optional<double> y) {
      if (x.has_value() != y.has_value()) return std::numeric_limits<double>::infinity();
      return x ? std::abs(*x - *y) : 0.0;
    };
    change[k] = std::max({std::abs(a.S - b.S), std::abs(a.ns - b.ns), std::abs(a.ni - b.ni), diff(a.Qs, b.Qs),
                          diff(a.Qi, b.Qi), diff(a.g2, b.g2)});
  });
  const double worst = *std::max_element(change.begin(), change.end());
  return {"truncation_doubling", worst < ctx.tol.doubling, false,
          fmt::format("{} points, largest observable change {:.3e} (bound {:.1e})", grid.size(), worst, ctx.tol.doubling)};
}

using CheckFn = CheckResult (*)(const Context&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"algebra_flat_limit", check_algebra_flat},
      {"algebra_shift_relations", check_algebra_shift},
      {"algebra_jpm_residual", check_algebra_jpm},
      {"su11_interior", check_su11},
      {"oracle_equivalence", check_oracle},
      {"flat_limit_scs", check_flat_scs},
      {"identity_evolution", check_identity},
      {"binomial_scalars", check_scalars},
      {"fig1_entropy_vs_lambda", check_fig1},
      {"fig2_entropy_vs_r_monotone", check_fig2_monotone},
      {"fig2_entropy_limit", check_fig2_limit},
      {"fig3_entropy_peak", check_fig3},
      {"fig4_joint_probabilities", check_fig4},
      {"fig7_correlation_anchors", check_fig7},
      {"schmidt_symmetry", check_schmidt},
      {"truncation_doubling", check_doubling},
  };
  return checks;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || c.informational; });
}

const CheckResult* VerifyReport::find(const std::string& name) const {
  auto it = std::find_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["passed"] = passed();
  doc["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    doc["checks"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"informational", c.informational}, {"detail", c.detail}});
  }
  return doc.dump(2);
}

const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

VerifyReport verify_suite(const VerifyOptions& options) {
  pdc::validate(options.policy);
  for (const auto& name : options.only) {
    const auto& names = verify_check_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw InvalidArgument(fmt::format("unknown verify check '{}'", name));
    }
  }
  const Context ctx{options, Tolerances(options.policy.tail_tol),
                    {options.policy.tail_tol, std::max(options.policy.max_pairs, FigureOptions{}.policy.max_pairs)}};
  VerifyReport report;
  for (const auto& [name, fn] : registry()) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), name) == options.only.end()) {
      continue;
    }
    try {
      report.checks.push_back(fn(ctx));
    } catch (const Error& e) {
      report.checks.push_back({name, false, false, fmt::format("raised: {}", e.what())});
    }
  }
  return report;
}

}  // namespace curvpdc::sweep
