#include "curvpdc/figures.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>

#include "curvpdc/sweep.hpp"
#include "json.hpp"

namespace curvpdc::sweep {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kM = 4;

struct Curve {
  std::string file;
  SweepConfig config;
};

ordered_json axis_json(const Axis& a) {
  return {{"name", std::string(param_name(a.param))}, {"start", a.start}, {"stop", a.stop}, {"steps", a.steps}};
}

ordered_json fixed_json(const FixedParams& f) {
  ordered_json j = ordered_json::object();
  if (f.lambda) j["lambda"] = *f.lambda;
  if (f.M) j["M"] = *f.M;
  if (f.z) {
    j["z_re"] = f.z->real();
    j["z_im"] = f.z->imag();
  }
  if (f.r) j["r"] = *f.r;
  if (f.theta) j["theta"] = *f.theta;
  return j;
}

SweepConfig base_config(const FigureOptions& options) {
  SweepConfig c;
  c.fixed.M = kM;
  c.fixed.theta = 0.0;
  c.policy = options.policy;
  c.threads = options.threads;
  return c;
}

std::vector<Curve> curves_for(std::string_view id, const FigureOptions& o) {
  const Axis lambda_curve{Param::lambda, 0.0, 10.0, o.curve_points};
  const Axis r_curve{Param::r, 0.0, 3.0, o.curve_points};
  const Axis z_curve{Param::z, 0.0, 3.0, o.curve_points};
  const Axis lambda_grid{Param::lambda, 0.0, 10.0, o.contour_points};
  const Axis r_grid{Param::r, 0.0, 3.0, o.contour_points};
  const Axis z_grid{Param::z, 0.0, 3.0, o.contour_points};

  std::vector<Curve> curves;
  auto add = [&](std::string file, std::vector<Axis> axes, FixedParams fixed) {
    SweepConfig c = base_config(o);
    c.axes = std::move(axes);
    fixed.M = kM;
    fixed.theta = 0.0;
    c.fixed = fixed;
    curves.push_back({std::move(file), std::move(c)});
  };

  if (id == "fig1") {
    for (const char* r : {"0.1", "0.5", "1.0"}) {
      add(fmt::format("fig1_r{}.csv", r), {lambda_curve}, {.z = Complex{1.0, 0.0}, .r = std::stod(r)});
    }
  } else if (id == "fig2") {
    for (const char* l : {"0", "0.5", "1"}) {
      add(fmt::format("fig2_lambda{}.csv", l), {r_curve}, {.lambda = std::stod(l), .z = Complex{1.0, 0.0}});
    }
  } else if (id == "fig3") {
    for (const char* l : {"0", "0.5", "1"}) {
      add(fmt::format("fig3_lambda{}.csv", l), {z_curve}, {.lambda = std::stod(l), .r = 0.5});
    }
  } else if (id == "fig4") {
    add("fig4_observables.csv", {lambda_curve}, {.z = Complex{1.0, 0.0}, .r = 0.1});
  } else if (id == "fig5" || id == "fig6" || id == "fig7") {
    add(fmt::format("{}_lambda_r.csv", id), {lambda_grid, r_grid}, {.z = Complex{1.0, 0.0}});
    add(fmt::format("{}_lambda_z.csv", id), {lambda_grid, z_grid}, {.r = 0.5});
  } else {
    throw InvalidArgument(fmt::format("unknown figure id '{}' (expected fig1..fig7)", id));
  }
  return curves;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument(fmt::format("cannot write {}", path.string()));
  out << text;
}

// Joint probabilities of fig4 in long format. Only entries that reach 1e-4
// somewhere along the sweep are kept; the rest are invisible on the plot.
std::string fig4_joint_csv(const SweepConfig& config) {
  const auto points = grid_points(config);
  std::vector<obs::JointDistribution> joints;
  joints.reserve(points.size());
  for (const auto& p : points) joints.push_back(*evaluate_point(p, config.policy, true).joint);

  std::map<fock::FockIndex, double> peak;
  for (const auto& joint : joints) {
    for (const auto& [index, prob] : joint.support()) peak[index] = std::max(peak[index], prob);
  }
  std::string out = "lambda,M,z_re,z_im,r,theta,n_s,n_i,P\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    for (const auto& [index, max_prob] : peak) {
      if (max_prob < 1e-4) continue;
      out += fmt::format("{:.12g},{},{:.12g},{:.12g},{:.12g},{:.12g},{},{},{:.12g}\n", p.lambda, p.M, p.z.real(),
                         p.z.imag(), p.r, p.theta, index.n_s, index.n_i, joints[k](index.n_s, index.n_i));
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
  return ids;
}

std::vector<fs::path> figure_data(std::string_view figure_id, const fs::path& out_dir, const FigureOptions& options) {
  const auto curves = curves_for(figure_id, options);
  fs::create_directories(out_dir);

  std::vector<fs::path> written;
  ordered_json manifest;
  manifest["figure"] = std::string(figure_id);
  manifest["columns"] = ordered_json::array();
  for (const auto& c : kParameterColumns) manifest["columns"].push_back(c);
  for (const auto& c : kObservableColumns) manifest["columns"].push_back(c);
  manifest["policy"] = {{"tail_tol", options.policy.tail_tol}, {"max_pairs", options.policy.max_pairs}};
  manifest["files"] = ordered_json::array();

  for (const auto& curve : curves) {
    const auto table = run_sweep(curve.config);
    std::string text = csv_header(table.observables) + "\n";
    for (const auto& row : table.rows) text += csv_row(row.point, row.report, table.observables) + "\n";
    const auto path = out_dir / curve.file;
    write_text(path, text);
    written.push_back(path);

    ordered_json entry{{"file", curve.file}, {"fixed", fixed_json(curve.config.fixed)}};
    entry["axes"] = ordered_json::array();
    for (const auto& a : curve.config.axes) entry["axes"].push_back(axis_json(a));
    manifest["files"].push_back(entry);
  }

  if (figure_id == "fig4") {
    const auto path = out_dir / "fig4_joint.csv";
    write_text(path, fig4_joint_csv(curves.front().config));
    written.push_back(path);
    manifest["files"].push_back({{"file", "fig4_joint.csv"},
                                 {"fixed", fixed_json(curves.front().config.fixed)},
                                 {"columns", {"lambda", "M", "z_re", "z_im", "r", "theta", "n_s", "n_i", "P"}}});
  }

  const auto manifest_path = out_dir / fmt::format("{}_manifest.json", figure_id);
  write_text(manifest_path, manifest.dump(2) + "\n");
  written.push_back(manifest_path);
  return written;
}

}  // namespace curvpdc::sweep
