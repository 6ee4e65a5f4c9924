#pragma once

#include <atomic>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "curvpdc/common.hpp"
#include "curvpdc/observables.hpp"
#include "curvpdc/pdc.hpp"

namespace curvpdc::sweep {

enum class Param { lambda, r, z };

Param parse_param(std::string_view name);
std::string_view param_name(Param p);

/// `steps` equally spaced values from start to stop inclusive.
struct Axis {
  Param param = Param::lambda;
  double start = 0.0;
  double stop = 1.0;
  int steps = 2;

  std::vector<double> values() const;
};

/// Parses "name:start:stop:steps", e.g. "lambda:0:10:101".
Axis parse_axis(std::string_view text);

struct FixedParams {
  std::optional<double> lambda{};
  std::optional<int> M{};
  std::optional<Complex> z{};
  std::optional<double> r{};
  std::optional<double> theta{};
};

struct PointParams {
  double lambda = 0.0;
  int M = 1;
  Complex z{};
  double r = 0.0;
  double theta = 0.0;
};

inline const std::vector<std::string> kParameterColumns = {"lambda", "M", "z_re", "z_im", "r", "theta"};
inline const std::vector<std::string> kObservableColumns = {"S", "ns", "ni", "Qs", "Qi", "g2", "leakage"};

struct SweepConfig {
  std::vector<Axis> axes;
  FixedParams fixed;
  std::vector<std::string> observables = kObservableColumns;
  pdc::TruncationPolicy policy;
  int threads = 1;
  std::string output_path;
};

/// Throws InvalidArgument describing the first problem found.
void validate(const SweepConfig& config);

/// Grid points in row-major order (first axis outermost). Swept z is real.
std::vector<PointParams> grid_points(const SweepConfig& config);

/// Seeds an SCS, evolves it analytically and measures the output.
obs::ObservableReport evaluate_point(const PointParams& point, const pdc::TruncationPolicy& policy,
                                     bool with_joint = false);

struct SweepRow {
  PointParams point;
  obs::ObservableReport report;
};

struct SweepTable {
  std::vector<std::string> observables;
  std::vector<SweepRow> rows;
};

/// One row per grid point, in grid order regardless of thread count.
/// A truncation failure aborts the sweep naming the offending point.
SweepTable run_sweep(const SweepConfig& config);

std::string csv_header(const std::vector<std::string>& observables);
std::string csv_row(const PointParams& point, const obs::ObservableReport& report,
                    const std::vector<std::string>& observables);
void write_csv(const SweepTable& table, std::ostream& out);

std::string describe(const PointParams& point);

/// Runs body(i) for i in [0, n) on up to `threads` workers. The exception
/// from the lowest failing index is rethrown after all workers finish.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int count = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (int k = 0; k < count; ++k) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace curvpdc::sweep
