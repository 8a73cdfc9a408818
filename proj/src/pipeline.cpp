#include "fsc/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <map>
#include <sstream>

#include "fsc/error.hpp"

namespace fsc {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

PlotSpec series_plot(const std::string& title, const std::string& ylabel, const MomentSeries& s,
                     const MomentSeries* ref, bool variance) {
  PlotSpec plot{title, "t", ylabel, false, {}};
  plot.lines.push_back({"FSC", s.times, variance ? s.variance : s.mean});
  if (ref) plot.lines.push_back({"reference", ref->times, variance ? ref->variance : ref->mean});
  return plot;
}

json diagnostics_json(const FscDiagnostics& d) {
  return {{"resets", d.resets},
          {"max_transfer_defect", d.max_transfer_defect},
          {"max_mean_shift", d.max_mean_shift},
          {"min_basis_size", d.min_basis_size},
          {"max_basis_size", d.max_basis_size},
          {"dropped_total", d.dropped_total},
          {"bootstrap_end", d.bootstrap_end},
          {"collapsed_steps", d.collapsed_steps}};
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void apply_axis(RunConfig& cfg, const std::string& axis, double value) {
  if (axis == "P") {
    cfg.fsc.P = static_cast<int>(value);
  } else if (axis == "dt") {
    cfg.fsc.dt = value;
  } else if (cfg.quadrature.kind == QuadratureSpec::Kind::MonteCarlo) {
    cfg.quadrature.q = static_cast<std::size_t>(value);
  } else {
    cfg.quadrature.points_per_dim = {static_cast<int>(value)};
  }
}

}  // namespace

std::string resolve_oracle(const RunConfig& cfg, const ProblemSpec& p) {
  if (cfg.oracle.kind != "auto") return cfg.oracle.kind;
  if (p.exact_response) return "closed_form";
  if (p.d == 1) return "dense";
  return "mc";
}

Reference compute_reference(const RunConfig& cfg, const ProblemSpec& p, const std::vector<double>& times) {
  Reference ref;
  const std::string kind = resolve_oracle(cfg, p);
  const int response = cfg.fsc.responses.front();
  if (kind == "none") return ref;
  if (kind == "closed_form") {
    ref.kind = ReferenceKind::ClosedForm;
    ref.series = closed_form_moments(p, times, dense_rule(p, cfg.oracle.dense_points));
  } else if (kind == "dense") {
    ref.kind = ReferenceKind::DenseQuadrature;
    ref.series = dense_path_moments(p, dense_rule(p, cfg.oracle.dense_points), cfg.fsc.dt, cfg.fsc.T, 10, response);
  } else {
    ref.kind = ReferenceKind::MonteCarlo;
    auto mc = mc_reference(p, cfg.oracle.realizations, cfg.fsc.dt, cfg.fsc.T, cfg.oracle.seed, response);
    ref.realizations = mc.realizations;
    ref.series = std::move(mc.series);
  }
  return ref;
}

RunOutput run_config(const RunConfig& cfg, bool write) {
  ProblemSpec problem = problem_for(cfg);
  auto start = std::chrono::steady_clock::now();
  RunOutput out;
  NodeSetPtr nodes = make_nodes(cfg.quadrature, problem);
  out.result = run_fsc(*problem.ode, problem.measure, cfg.fsc, nodes);
  for (std::size_t r = 0; r < out.result.series.size() && r < problem.responses.size(); ++r)
    if (cfg.fsc.responses[r] == problem.responses[r]) out.result.series[r].label = problem.response_names[r];
  const MomentSeries& primary = out.result.series.front();
  out.reference = compute_reference(cfg, problem, primary.times);
  if (out.reference.series) out.errors = error_metrics(primary, *out.reference.series, out.reference.kind);
  out.wall_seconds = seconds_since(start);
  if (!write) return out;

  fs::create_directories(cfg.out_dir);
  fs::path dir(cfg.out_dir);
  write_moments_csv((dir / "moments.csv").string(), primary);
  for (std::size_t r = 1; r < out.result.series.size(); ++r)
    write_moments_csv((dir / ("moments_" + out.result.series[r].label + ".csv")).string(), out.result.series[r]);
  if (out.reference.series) write_moments_csv((dir / "reference.csv").string(), *out.reference.series);
  if (out.errors) write_errors_csv((dir / "errors.csv").string(), *out.errors);

  json summary = {{"csv_schema", kCsvSchema},
                  {"problem", cfg.problem},
                  {"variant", cfg.variant},
                  {"response", primary.label},
                  {"config", dump_config(cfg)},
                  {"diagnostics", diagnostics_json(out.result.diagnostics)},
                  {"wall_seconds", out.wall_seconds}};
  if (out.errors) {
    summary["global_mean"] = number(out.errors->global_mean);
    summary["global_var"] = number(out.errors->global_var);
    summary["reference_kind"] = to_string(out.errors->reference);
    summary["reference_interpolated"] = out.errors->interpolated;
    if (out.errors->reference == ReferenceKind::MonteCarlo) summary["mc_realizations"] = out.errors->mc_realizations;
  } else {
    summary["reference_kind"] = "none";
  }
  write_text((dir / "summary.json").string(), summary.dump(2) + "\n");

  if (cfg.plots) {
    const MomentSeries* r = out.reference.series ? &*out.reference.series : nullptr;
    write_text((dir / "mean.svg").string(), render_svg(series_plot("Mean of " + primary.label, "E", primary, r, false)));
    write_text((dir / "variance.svg").string(),
               render_svg(series_plot("Variance of " + primary.label, "Var", primary, r, true)));
    if (out.errors) {
      PlotSpec e{"Local error of " + primary.label, "t", "error", true, {}};
      e.lines.push_back({"mean", out.errors->times, out.errors->eps_mean});
      e.lines.push_back({"variance", out.errors->times, out.errors->eps_var});
      write_text((dir / "error.svg").string(), render_svg(e));
    }
  }
  return out;
}

std::vector<SweepPoint> sweep_config(const RunConfig& base, const std::string& axis,
                                     const std::vector<double>& values, bool write) {
  if (axis != "P" && axis != "dt" && axis != "Q")
    throw Error(ErrorCode::ConfigError, "sweep axis must be P, dt or Q");
  if (values.empty()) throw Error(ErrorCode::ConfigError, "sweep needs at least one value");
  ProblemSpec problem = problem_for(base);
  std::map<double, Reference> refs;  // references depend only on the time grid
  std::vector<SweepPoint> points;
  for (double v : values) {
    RunConfig cfg = base;
    apply_axis(cfg, axis, v);
    SweepPoint pt;
    pt.value = v;
    pt.global_mean = pt.global_var = std::numeric_limits<double>::quiet_NaN();
    auto start = std::chrono::steady_clock::now();
    try {
      validate(cfg.fsc, problem.ode->order());
      NodeSetPtr nodes = make_nodes(cfg.quadrature, problem);
      FscResult result = run_fsc(*problem.ode, problem.measure, cfg.fsc, nodes);
      auto it = refs.find(cfg.fsc.dt);
      if (it == refs.end())
        it = refs.emplace(cfg.fsc.dt, compute_reference(cfg, problem, result.series.front().times)).first;
      if (it->second.series) {
        ErrorReport r = error_metrics(result.series.front(), *it->second.series, it->second.kind);
        pt.global_mean = r.global_mean;
        pt.global_var = r.global_var;
      }
    } catch (const Error& e) {
      pt.error = e.what();
    }
    pt.wall_seconds = seconds_since(start);
    points.push_back(pt);
  }
  if (!write) return points;

  fs::create_directories(base.out_dir);
  fs::path dir(base.out_dir);
  std::ostringstream csv;
  csv << "value,global_mean,global_var\n";
  json timing = json::array();
  PlotSpec plot{"Global error vs " + axis, axis, "global error", true, {}};
  plot.lines.resize(2);
  plot.lines[0].label = "mean";
  plot.lines[1].label = "variance";
  for (const auto& p : points) {
    csv << g17(p.value) << ',' << g17(p.global_mean) << ',' << g17(p.global_var) << '\n';
    json t = {{"value", p.value}, {"wall_seconds", p.wall_seconds}};
    if (!p.error.empty()) t["error"] = p.error;
    timing.push_back(t);
    for (int k = 0; k < 2; ++k) plot.lines[k].x.push_back(p.value);
    plot.lines[0].y.push_back(p.global_mean);
    plot.lines[1].y.push_back(p.global_var);
  }
  write_text((dir / "sweep.csv").string(), csv.str());
  json meta = {{"csv_schema", kCsvSchema}, {"axis", axis}, {"config", dump_config(base)}, {"points", timing}};
  write_text((dir / "sweep.json").string(), meta.dump(2) + "\n");
  if (base.plots) write_text((dir / "sweep.svg").string(), render_svg(plot));
  return points;
}

}  // namespace fsc
