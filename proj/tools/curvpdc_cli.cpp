// Command-line front end: state, evolve, sweep, figure and verify.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "curvpdc/figures.hpp"
#include "curvpdc/fock.hpp"
#include "curvpdc/observables.hpp"
#include "curvpdc/pdc.hpp"
#include "curvpdc/scs.hpp"
#include "curvpdc/sweep.hpp"
#include "curvpdc/verify.hpp"
#include "json.hpp"

using namespace curvpdc;

namespace {

enum Exit { kOk = 0, kCheckFailure = 1, kInvalidConfig = 2, kTruncationFailure = 3 };

struct Common {
  double tail_tol = 1e-12;
  std::string out;
  std::string format = "json";
  int threads = 1;
  std::optional<int> max_pairs;

  pdc::TruncationPolicy policy(int default_pairs = pdc::TruncationPolicy{}.max_pairs) const {
    return {tail_tol, max_pairs.value_or(default_pairs)};
  }
};

struct SeedFlags {
  std::optional<double> lambda;
  std::optional<int> M;
  std::optional<double> z_re;
  std::optional<double> z_im;
  std::optional<double> r;
  std::optional<double> theta;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
  c.format = default_format;
  cmd->add_option("--config", "flat `key = value` file mirroring the flags; command-line flags take precedence");
  cmd->add_option("--tail-tol", c.tail_tol, "admissible neglected probability of the Fock truncation")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "output path (stdout when omitted; a directory for `figure`)");
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--max-pairs", c.max_pairs, "cap on created photon pairs")->check(CLI::PositiveNumber);
}

void add_seed(CLI::App* cmd, SeedFlags& s, bool with_pump) {
  cmd->add_option("--lambda", s.lambda, "space curvature (>= 0)");
  cmd->add_option("--M", s.M, "total photon number of the seed");
  cmd->add_option("--z-re", s.z_re, "Re z");
  cmd->add_option("--z-im", s.z_im, "Im z");
  if (with_pump) {
    cmd->add_option("--r", s.r, "squeezing magnitude");
    cmd->add_option("--theta", s.theta, "squeezing phase");
  }
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream file(c.out);
  if (!file) throw InvalidArgument(fmt::format("cannot write {}", c.out));
  file << text;
  if (!text.empty() && text.back() != '\n') file << '\n';
}

template <typename T>
T required(const std::optional<T>& value, const char* flag) {
  if (!value) throw InvalidArgument(fmt::format("{} is required", flag));
  return *value;
}

scs::SCSParams seed_params(const SeedFlags& s) {
  scs::SCSParams p{required(s.lambda, "--lambda"), required(s.M, "--M"), {s.z_re.value_or(0.0), s.z_im.value_or(0.0)}};
  scs::validate(p);
  return p;
}

std::string amplitudes_csv(const fock::TwoModeState& state) {
  std::string out = "n_s,n_i,re,im\n";
  for (const auto& e : state.entries()) {
    out += fmt::format("{},{},{:.17g},{:.17g}\n", e.index.n_s, e.index.n_i, e.amplitude.real(), e.amplitude.imag());
  }
  return out;
}

int run_state(const Common& c, const SeedFlags& s) {
  const auto state = scs::build_scs(seed_params(s));
  emit(c, c.format == "csv" ? amplitudes_csv(state) : fock::to_json(state));
  return kOk;
}

int run_evolve(const Common& c, const SeedFlags& s, const std::string& method) {
  const auto seed = seed_params(s);
  const auto pump = pdc::make_params(required(s.r, "--r"), s.theta.value_or(0.0));
  const auto policy = c.policy();
  pdc::validate(policy);

  std::optional<pdc::Evolution> analytic;
  std::optional<pdc::Evolution> numeric;
  if (method != "numeric") analytic = pdc::evolve_analytic(seed, pump, policy);
  if (method != "analytic") {
    numeric = pdc::evolve_numeric_converged(scs::build_scs(seed), pump, c.tail_tol, seed.M + 2 * policy.max_pairs);
  }
  const auto& shown = analytic ? *analytic : *numeric;

  if (c.format == "csv") {
    emit(c, amplitudes_csv(shown.state));
    return kOk;
  }
  nlohmann::ordered_json meta;
  meta["method"] = method;
  meta["cutoff"] = shown.cutoff;
  meta["leakage"] = shown.leakage;
  if (analytic && numeric) {
    const int cutoff = std::max(analytic->cutoff, numeric->cutoff);
    meta["numeric_cutoff"] = numeric->cutoff;
    meta["numeric_leakage"] = numeric->leakage;
    meta["fidelity_between_methods"] =
        fock::fidelity(analytic->state.embedded(cutoff, cutoff), numeric->state.embedded(cutoff, cutoff));
  }
  auto doc = nlohmann::ordered_json::parse(fock::to_json(shown.state));
  doc["metadata"] = meta;
  emit(c, doc.dump(2));
  return kOk;
}

sweep::FixedParams fixed_params(const SeedFlags& s) {
  sweep::FixedParams f;
  f.lambda = s.lambda;
  f.M = s.M;
  if (s.z_re || s.z_im) f.z = Complex{s.z_re.value_or(0.0), s.z_im.value_or(0.0)};
  f.r = s.r;
  f.theta = s.theta.value_or(0.0);
  return f;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string optional_json(std::optional<double> v) { return v ? fmt::format("{:.12g}", *v) : "null"; }

int run_sweep_cmd(const Common& c, const SeedFlags& s, const std::vector<std::string>& axes,
                  const std::string& observables) {
  sweep::SweepConfig config;
  for (const auto& a : axes) config.axes.push_back(sweep::parse_axis(a));
  config.fixed = fixed_params(s);
  if (!observables.empty()) config.observables = split_list(observables);
  config.policy = c.policy(sweep::FigureOptions{}.policy.max_pairs);
  config.threads = c.threads;
  config.output_path = c.out;
  sweep::validate(config);
  const auto table = sweep::run_sweep(config);

  std::ostringstream text;
  if (c.format == "csv") {
    sweep::write_csv(table, text);
  } else {
    // Same fixed formatting as the CSV so both outputs are deterministic.
    text << "[\n";
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
      const auto& [p, rep] = table.rows[k];
      text << fmt::format("  {{\"lambda\": {:.12g}, \"M\": {}, \"z_re\": {:.12g}, \"z_im\": {:.12g}, \"r\": {:.12g}, "
                          "\"theta\": {:.12g}",
                          p.lambda, p.M, p.z.real(), p.z.imag(), p.r, p.theta);
      for (const auto& name : table.observables) {
        std::optional<double> v;
        if (name == "S") v = rep.S;
        else if (name == "ns") v = rep.ns;
        else if (name == "ni") v = rep.ni;
        else if (name == "Qs") v = rep.Qs;
        else if (name == "Qi") v = rep.Qi;
        else if (name == "g2") v = rep.g2;
        else if (name == "leakage") v = rep.leakage;
        text << fmt::format(", \"{}\": {}", name, optional_json(v));
      }
      text << (k + 1 < table.rows.size() ? "},\n" : "}\n");
    }
    text << "]\n";
  }
  emit(c, text.str());
  return kOk;
}

int run_figure(const Common& c, const std::vector<std::string>& ids, int curve_points, int contour_points) {
  sweep::FigureOptions options;
  options.policy.tail_tol = c.tail_tol;
  if (c.max_pairs) options.policy.max_pairs = *c.max_pairs;
  options.threads = c.threads;
  options.curve_points = curve_points;
  options.contour_points = contour_points;
  if (options.curve_points < 2 || options.contour_points < 2) throw InvalidArgument("grid densities must be >= 2");

  std::vector<std::string> selected = ids;
  if (selected.empty() || (selected.size() == 1 && selected[0] == "all")) selected = sweep::figure_ids();
  const std::filesystem::path dir = c.out.empty() ? std::filesystem::path(".") : std::filesystem::path(c.out);
  std::filesystem::create_directories(dir);
  for (const auto& id : selected) {
    for (const auto& path : sweep::figure_data(id, dir, options)) std::cerr << "wrote " << path.string() << '\n';
  }
  return kOk;
}

int run_verify(const Common& c, const std::vector<std::string>& only, bool reduced) {
  sweep::VerifyOptions options;
  options.policy = c.policy();
  options.only = only;
  options.reduced_grid = reduced;
  options.threads = c.threads;
  const auto report = sweep::verify_suite(options);
  if (c.format == "csv") {
    std::string text = "name,passed,informational,detail\n";
    for (const auto& check : report.checks) {
      std::string detail = check.detail;
      std::string quoted;
      for (char ch : detail) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      text += fmt::format("{},{},{},\"{}\"\n", check.name, check.passed, check.informational, quoted);
    }
    emit(c, text);
  } else {
    emit(c, report.to_json());
  }
  for (const auto& check : report.checks) {
    std::cerr << fmt::format("{:<28} {}  {}\n", check.name,
                             check.informational ? "INFO" : (check.passed ? "PASS" : "FAIL"), check.detail);
  }
  return report.passed() ? kOk : kCheckFailure;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  std::string out(text.substr(first, last - first + 1));
  if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front()) {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

// Reads `key = value` lines into flag tokens. `true`/`false` values toggle
// switches; key `id` supplies positional arguments.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::vector<std::string> tokens;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    const std::string content = trim(line.substr(0, line.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", fmt::format("{}:{}: expected key = value", path, number));
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) throw CLI::ValidationError("--config", fmt::format("{}:{}: empty key", path, number));
    if (key == "id") {
      tokens.push_back(value);
    } else if (value == "true") {
      tokens.push_back("--" + key);
    } else if (value != "false") {
      tokens.push_back("--" + key);
      tokens.push_back(value);
    }
  }
  return tokens;
}

// Splices config-file tokens in right after the subcommand so that later
// command-line flags override them.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::vector<std::string> out;
  std::vector<std::string> from_file;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw CLI::ValidationError("--config", "requires a file path");
      from_file = config_tokens(args[++k]);
    } else if (args[k].starts_with("--config=")) {
      from_file = config_tokens(args[k].substr(9));
    } else {
      out.push_back(args[k]);
    }
  }
  if (!from_file.empty() && out.size() >= 2) out.insert(out.begin() + 2, from_file.begin(), from_file.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Down-conversion of two-mode sphere coherent states"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common state_c, evolve_c, sweep_c, figure_c, verify_c;
  SeedFlags state_s, evolve_s, sweep_s;

  auto* state = app.add_subcommand("state", "print the sphere coherent state amplitudes");
  add_common(state, state_c, "json");
  add_seed(state, state_s, false);

  std::string method = "analytic";
  auto* evolve = app.add_subcommand("evolve", "evolve a sphere coherent state through the down-converter");
  add_common(evolve, evolve_c, "json");
  add_seed(evolve, evolve_s, true);
  evolve->add_option("--method", method, "evolution path")->check(CLI::IsMember({"analytic", "numeric", "both"}));

  std::vector<std::string> axes;
  std::string observables;
  auto* sweep_cmd = app.add_subcommand("sweep", "tabulate observables over a parameter grid");
  add_common(sweep_cmd, sweep_c, "csv");
  add_seed(sweep_cmd, sweep_s, true);
  sweep_cmd->add_option("--axis", axes, "name:start:stop:steps with name in {lambda, r, z}; repeat for 2-D")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sweep_cmd->add_option("--observables", observables, "comma-separated subset of S,ns,ni,Qs,Qi,g2,leakage");

  std::vector<std::string> ids;
  sweep::FigureOptions figure_defaults;
  int curve_points = figure_defaults.curve_points;
  int contour_points = figure_defaults.contour_points;
  auto* figure = app.add_subcommand("figure", "regenerate figure data (fig1..fig7 or all)");
  add_common(figure, figure_c, "csv");
  figure->add_option("id", ids, "figure ids")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  figure->add_option("--curve-points", curve_points, "points per curve");
  figure->add_option("--contour-points", contour_points, "points per contour axis");

  std::vector<std::string> only;
  bool reduced = false;
  auto* verify = app.add_subcommand("verify", "run the self-verification suite");
  add_common(verify, verify_c, "json");
  verify->add_option("--only", only, "run only the named checks")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  verify->add_flag("--reduced", reduced, "smaller oracle and doubling grids");

  try {
    auto args = expand_config(argc, argv);
    std::vector<char*> pointers;
    for (auto& a : args) pointers.push_back(a.data());
    app.parse(static_cast<int>(pointers.size()), pointers.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidConfig;
  }

  try {
    if (*state) return run_state(state_c, state_s);
    if (*evolve) return run_evolve(evolve_c, evolve_s, method);
    if (*sweep_cmd) return run_sweep_cmd(sweep_c, sweep_s, axes, observables);
    if (*figure) return run_figure(figure_c, ids, curve_points, contour_points);
    if (*verify) return run_verify(verify_c, only, reduced);
  } catch (const TruncationError& e) {
    std::cerr << "truncation failure: " << e.what() << '\n';
    return kTruncationFailure;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const AlgebraError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailure;
  }
  return kOk;
}
