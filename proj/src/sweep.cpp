#include "curvpdc/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "curvpdc/scs.hpp"

namespace curvpdc::sweep {

namespace {

double parse_double(std::string_view text, std::string_view what) {
  std::string owned(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(owned, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != owned.size()) throw InvalidArgument(fmt::format("cannot parse {} from '{}'", what, text));
  return value;
}

std::string format_value(double v) { return fmt::format("{:.12g}", v); }

std::string format_optional(const std::optional<double>& v) { return v ? format_value(*v) : std::string{}; }

}  // namespace

Param parse_param(std::string_view name) {
  if (name == "lambda") return Param::lambda;
  if (name == "r") return Param::r;
  if (name == "z") return Param::z;
  throw InvalidArgument(fmt::format("unknown sweep parameter '{}' (expected lambda, r or z)", name));
}

std::string_view param_name(Param p) {
  switch (p) {
    case Param::lambda:
      return "lambda";
    case Param::r:
      return "r";
    case Param::z:
      return "z";
  }
  return "?";
}

std::vector<double> Axis::values() const {
  std::vector<double> out(steps);
  for (int k = 0; k < steps; ++k) {
    out[k] = k == steps - 1 ? stop : start + (stop - start) * static_cast<double>(k) / (steps - 1);
  }
  return out;
}

Axis parse_axis(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  for (;;) {
    auto colon = text.find(':', begin);
    parts.push_back(text.substr(begin, colon - begin));
    if (colon == std::string_view::npos) break;
    begin = colon + 1;
  }
  if (parts.size() != 4) throw InvalidArgument(fmt::format("axis '{}' must look like name:start:stop:steps", text));
  Axis axis;
  axis.param = parse_param(parts[0]);
  axis.start = parse_double(parts[1], "axis start");
  axis.stop = parse_double(parts[2], "axis stop");
  int steps = 0;
  auto [ptr, ec] = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), steps);
  if (ec != std::errc{} || ptr != parts[3].data() + parts[3].size()) {
    throw InvalidArgument(fmt::format("cannot parse axis steps from '{}'", parts[3]));
  }
  axis.steps = steps;
  return axis;
}

void validate(const SweepConfig& config) {
  if (config.axes.empty() || config.axes.size() > 2) {
    throw InvalidArgument(fmt::format("a sweep needs one or two axes, got {}", config.axes.size()));
  }
  if (config.axes.size() == 2 && config.axes[0].param == config.axes[1].param) {
    throw InvalidArgument("the two sweep axes must differ");
  }
  for (const auto& axis : config.axes) {
    if (axis.steps < 2) throw InvalidArgument(fmt::format("axis {} needs at least 2 steps", param_name(axis.param)));
    if (!std::isfinite(axis.start) || !std::isfinite(axis.stop) || !(axis.start < axis.stop)) {
      throw InvalidArgument(fmt::format("axis {} needs start < stop, got [{}, {}]", param_name(axis.param),
                                        axis.start, axis.stop));
    }
    const bool fixed_too = (axis.param == Param::lambda && config.fixed.lambda) ||
                           (axis.param == Param::r && config.fixed.r) || (axis.param == Param::z && config.fixed.z);
    if (fixed_too) {
      throw InvalidArgument(fmt::format("parameter {} is both swept and fixed", param_name(axis.param)));
    }
  }
  auto swept = [&config](Param p) {
    return std::any_of(config.axes.begin(), config.axes.end(), [p](const Axis& a) { return a.param == p; });
  };
  if (!config.fixed.M) throw InvalidArgument("M must be fixed");
  if (*config.fixed.M < 1) throw InvalidArgument(fmt::format("M must be >= 1, got {}", *config.fixed.M));
  if (!config.fixed.theta) throw InvalidArgument("theta must be fixed");
  if (!swept(Param::lambda) && !config.fixed.lambda) throw InvalidArgument("lambda is neither swept nor fixed");
  if (!swept(Param::r) && !config.fixed.r) throw InvalidArgument("r is neither swept nor fixed");
  if (!swept(Param::z) && !config.fixed.z) throw InvalidArgument("z is neither swept nor fixed");
  for (const auto& name : config.observables) {
    if (std::find(kObservableColumns.begin(), kObservableColumns.end(), name) == kObservableColumns.end()) {
      throw InvalidArgument(fmt::format("unknown observable column '{}'", name));
    }
  }
  if (config.threads < 1) throw InvalidArgument("threads must be >= 1");
  pdc::validate(config.policy);
}

std::vector<PointParams> grid_points(const SweepConfig& config) {
  validate(config);
  PointParams base;
  base.M = *config.fixed.M;
  base.theta = *config.fixed.theta;
  if (config.fixed.lambda) base.lambda = *config.fixed.lambda;
  if (config.fixed.r) base.r = *config.fixed.r;
  if (config.fixed.z) base.z = *config.fixed.z;

  auto assign = [](PointParams& p, Param param, double v) {
    switch (param) {
      case Param::lambda:
        p.lambda = v;
        break;
      case Param::r:
        p.r = v;
        break;
      case Param::z:
        p.z = Complex{v, 0.0};
        break;
    }
  };

  std::vector<PointParams> points;
  const auto outer = config.axes[0].values();
  for (double a : outer) {
    PointParams p = base;
    assign(p, config.axes[0].param, a);
    if (config.axes.size() == 1) {
      points.push_back(p);
      continue;
    }
    for (double b : config.axes[1].values()) {
      PointParams q = p;
      assign(q, config.axes[1].param, b);
      points.push_back(q);
    }
  }
  return points;
}

std::string describe(const PointParams& p) {
  return fmt::format("(lambda={}, M={}, z={}{:+}i, r={}, theta={})", p.lambda, p.M, p.z.real(), p.z.imag(), p.r,
                     p.theta);
}

obs::ObservableReport evaluate_point(const PointParams& point, const pdc::TruncationPolicy& policy, bool with_joint) {
  const scs::SCSParams seed{point.lambda, point.M, point.z};
  const auto pdc = pdc::make_params(point.r, point.theta);
  const auto evolution = pdc::evolve_analytic(seed, pdc, policy);
  return obs::measure(evolution.state, evolution.leakage, with_joint);
}

SweepTable run_sweep(const SweepConfig& config) {
  const auto points = grid_points(config);
  SweepTable table;
  table.observables = config.observables;
  table.rows.resize(points.size());
  parallel_for(points.size(), config.threads, [&](std::size_t i) {
    try {
      table.rows[i] = {points[i], evaluate_point(points[i], config.policy)};
    } catch (const TruncationError& e) {
      throw TruncationError(fmt::format("grid point {} {}: {}", i, describe(points[i]), e.what()));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(fmt::format("grid point {} {}: {}", i, describe(points[i]), e.what()));
    }
  });
  return table;
}

std::string csv_header(const std::vector<std::string>& observables) {
  std::string out;
  for (const auto& c : kParameterColumns) out += (out.empty() ? "" : ",") + c;
  for (const auto& c : observables) out += "," + c;
  return out;
}

std::string csv_row(const PointParams& p, const obs::ObservableReport& r, const std::vector<std::string>& observables) {
  std::string out = fmt::format("{},{},{},{},{},{}", format_value(p.lambda), p.M, format_value(p.z.real()),
                                format_value(p.z.imag()), format_value(p.r), format_value(p.theta));
  for (const auto& c : observables) {
    out += ',';
    if (c == "S") out += format_value(r.S);
    else if (c == "ns") out += format_value(r.ns);
    else if (c == "ni") out += format_value(r.ni);
    else if (c == "Qs") out += format_optional(r.Qs);
    else if (c == "Qi") out += format_optional(r.Qi);
    else if (c == "g2") out += format_optional(r.g2);
    else if (c == "leakage") out += format_value(r.leakage);
  }
  return out;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  out << csv_header(table.observables) << '\n';
  for (const auto& row : table.rows) out << csv_row(row.point, row.report, table.observables) << '\n';
}

}  // namespace curvpdc::sweep
