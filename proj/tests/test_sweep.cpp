#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curvpdc/figures.hpp"
#include "curvpdc/sweep.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace curvpdc;
using namespace curvpdc::sweep;
namespace fs = std::filesystem;

namespace {

SweepConfig fig1_blue() {
  SweepConfig c;
  c.axes = {parse_axis("lambda:0:10:101")};
  c.fixed.M = 4;
  c.fixed.z = Complex{1.0, 0.0};
  c.fixed.r = 0.1;
  c.fixed.theta = 0.0;
  return c;
}

std::string csv_text(const SweepTable& table) {
  std::ostringstream out;
  write_csv(table, out);
  return out.str();
}

std::vector<std::string> lines_of(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("curvpdc_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("axis parsing") {
  const auto a = parse_axis("r:0:3:7");
  CHECK(a.param == Param::r);
  CHECK(a.steps == 7);
  const auto v = a.values();
  REQUIRE(v.size() == 7);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 3.0);
  CHECK(v[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(parse_axis("r:0:3"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("q:0:3:4"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("r:0:x:4"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("r:0:3:4.5"), InvalidArgument);
  CHECK(param_name(Param::z) == "z");
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(validate(fig1_blue()));

  auto degenerate = fig1_blue();
  degenerate.axes = {parse_axis("lambda:1:1:2")};
  CHECK_THROWS_AS(validate(degenerate), InvalidArgument);

  auto one_step = fig1_blue();
  one_step.axes = {parse_axis("lambda:0:1:1")};
  CHECK_THROWS_AS(validate(one_step), InvalidArgument);

  auto overlap = fig1_blue();
  overlap.fixed.lambda = 1.0;
  CHECK_THROWS_AS(validate(overlap), InvalidArgument);

  auto missing = fig1_blue();
  missing.fixed.r.reset();
  CHECK_THROWS_AS(validate(missing), InvalidArgument);

  auto no_m = fig1_blue();
  no_m.fixed.M.reset();
  CHECK_THROWS_AS(validate(no_m), InvalidArgument);

  auto twice = fig1_blue();
  twice.axes.push_back(parse_axis("lambda:0:2:3"));
  CHECK_THROWS_AS(validate(twice), InvalidArgument);

  auto three = fig1_blue();
  three.fixed.r.reset();
  three.fixed.z.reset();
  three.axes = {parse_axis("lambda:0:1:2"), parse_axis("r:0:1:2"), parse_axis("z:0:1:2")};
  CHECK_THROWS_AS(validate(three), InvalidArgument);

  auto bad_column = fig1_blue();
  bad_column.observables = {"S", "purity"};
  CHECK_THROWS_AS(validate(bad_column), InvalidArgument);

  auto no_threads = fig1_blue();
  no_threads.threads = 0;
  CHECK_THROWS_AS(validate(no_threads), InvalidArgument);
}

TEST_CASE("grid order is row-major") {
  auto c = fig1_blue();
  c.fixed.r.reset();
  c.axes = {parse_axis("lambda:0:1:2"), parse_axis("r:0:1:3")};
  const auto pts = grid_points(c);
  REQUIRE(pts.size() == 6);
  CHECK(pts[0].lambda == 0.0);
  CHECK(pts[1].r == 0.5);
  CHECK(pts[2].r == 1.0);
  CHECK(pts[3].lambda == 1.0);
  CHECK(pts[3].r == 0.0);
}

TEST_CASE("fig1 blue curve sweep") {
  const auto table = run_sweep(fig1_blue());
  REQUIRE(table.rows.size() == 101);
  CHECK(table.rows.front().point.lambda == 0.0);
  CHECK(table.rows.back().point.lambda == 10.0);
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    CHECK(table.rows[k].report.S <= table.rows[k - 1].report.S + 1e-9);
  }
  const auto text = csv_text(table);
  CHECK(text.substr(0, text.find('\n')) == "lambda,M,z_re,z_im,r,theta,S,ns,ni,Qs,Qi,g2,leakage");
}

TEST_CASE("two-axis contour table") {
  auto c = fig1_blue();
  c.fixed.r.reset();
  c.axes = {parse_axis("lambda:0:10:5"), parse_axis("r:0:3:4")};
  c.policy = FigureOptions{}.policy;
  const auto table = run_sweep(c);
  CHECK(table.rows.size() == 20);
  for (const auto& row : table.rows) CHECK(row.report.S >= 0.0);
}

TEST_CASE("determinism and thread-count invariance") {
  auto c = fig1_blue();
  c.fixed.r.reset();
  c.axes = {parse_axis("lambda:0:10:7"), parse_axis("r:0:1.5:6")};
  c.policy = FigureOptions{}.policy;
  const auto serial = csv_text(run_sweep(c));
  CHECK(serial == csv_text(run_sweep(c)));
  for (int threads : {2, 3, 8}) {
    c.threads = threads;
    CHECK(csv_text(run_sweep(c)) == serial);
  }
}

TEST_CASE("undefined observables serialize as empty fields") {
  auto c = fig1_blue();
  c.axes = {parse_axis("lambda:0:1:2")};
  c.fixed.z = Complex{0.0, 0.0};
  c.fixed.r = 0.0;
  const auto text = csv_text(run_sweep(c));
  std::istringstream in(text);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  // |0, 4>: signal empty, so Qs and g2 are undefined.
  CHECK(row == "0,4,0,0,0,0,0,0,4,,-1,,0");
}

TEST_CASE("observable subsets keep the parameter columns") {
  auto c = fig1_blue();
  c.axes = {parse_axis("lambda:0:1:2")};
  c.observables = {"g2", "S"};
  const auto text = csv_text(run_sweep(c));
  CHECK(text.substr(0, text.find('\n')) == "lambda,M,z_re,z_im,r,theta,g2,S");
}

TEST_CASE("a truncation failure names the grid point") {
  auto c = fig1_blue();
  c.fixed.r.reset();
  c.axes = {parse_axis("r:0:3:4")};
  c.fixed.lambda = 0.0;
  c.policy = {1e-12, 20};
  try {
    run_sweep(c);
    FAIL("expected a truncation failure");
  } catch (const TruncationError& e) {
    const std::string what = e.what();
    CHECK(what.find("grid point") != std::string::npos);
    CHECK(what.find("r=") != std::string::npos);
  }
}

TEST_CASE("figure data files and manifests") {
  FigureOptions small;
  small.curve_points = 6;
  small.contour_points = 4;
  const auto dir = scratch_dir("figures");

  const auto fig1 = figure_data("fig1", dir, small);
  CHECK(fig1.size() == 4);
  for (const char* name : {"fig1_r0.1.csv", "fig1_r0.5.csv", "fig1_r1.0.csv", "fig1_manifest.json"}) {
    CHECK(fs::exists(dir / name));
  }
  const auto rows = lines_of(dir / "fig1_r0.1.csv");
  CHECK(rows.size() == 7);
  CHECK(rows[0] == "lambda,M,z_re,z_im,r,theta,S,ns,ni,Qs,Qi,g2,leakage");
  CHECK(rows[1].starts_with("0,4,1,0,0.1,0,"));
  CHECK(rows[6].starts_with("10,4,1,0,0.1,0,"));

  std::ifstream mf(dir / "fig1_manifest.json");
  const auto manifest = nlohmann::json::parse(mf);
  CHECK(manifest["files"].size() == 3);
  CHECK(manifest["files"][0]["fixed"]["M"] == 4);

  const auto fig4 = figure_data("fig4", dir, small);
  CHECK(fs::exists(dir / "fig4_observables.csv"));
  const auto joint = lines_of(dir / "fig4_joint.csv");
  CHECK(joint[0] == "lambda,M,z_re,z_im,r,theta,n_s,n_i,P");
  CHECK(joint.size() > 6);

  figure_data("fig7", dir, small);
  const auto lr = lines_of(dir / "fig7_lambda_r.csv");
  const auto lz = lines_of(dir / "fig7_lambda_z.csv");
  CHECK(lr.size() == 17);
  CHECK(lz.size() == 17);
  CHECK(lr[1].starts_with("0,4,1,0,0,0,"));
  CHECK(lz[1].starts_with("0,4,0,0,0.5,0,"));

  CHECK_THROWS_AS(figure_data("fig8", dir, small), InvalidArgument);
  CHECK(figure_ids().size() == 7);
  fs::remove_all(dir);
}

TEST_CASE("figure output is reproducible") {
  FigureOptions small;
  small.curve_points = 5;
  small.contour_points = 4;
  const auto a = scratch_dir("repro_a");
  const auto b = scratch_dir("repro_b");
  figure_data("fig5", a, small);
  small.threads = 3;
  figure_data("fig5", b, small);
  for (const char* name : {"fig5_lambda_r.csv", "fig5_lambda_z.csv", "fig5_manifest.json"}) {
    CHECK(lines_of(a / name) == lines_of(b / name));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}
