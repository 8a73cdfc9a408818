#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsc/config.hpp"
#include "fsc/oracle.hpp"
#include "fsc/report.hpp"

namespace fsc {

inline constexpr int kCsvSchema = 1;

struct Reference {
  std::optional<MomentSeries> series;
  ReferenceKind kind = ReferenceKind::ClosedForm;
  std::size_t realizations = 0;
};

// auto picks the closed form when one exists, dense pathwise quadrature for d = 1 and
// Monte Carlo otherwise.
std::string resolve_oracle(const RunConfig& cfg, const ProblemSpec& problem);
Reference compute_reference(const RunConfig& cfg, const ProblemSpec& problem, const std::vector<double>& times);

struct RunOutput {
  FscResult result;
  Reference reference;
  std::optional<ErrorReport> errors;
  double wall_seconds = 0.0;
};

// One simulation plus its reference; writes moments.csv, reference.csv, errors.csv,
// summary.json and the SVG plots into cfg.out_dir when `write` is set.
RunOutput run_config(const RunConfig& cfg, bool write = true);

struct SweepPoint {
  double value = 0.0;
  double global_mean = 0.0;  // NaN when the point failed
  double global_var = 0.0;
  double wall_seconds = 0.0;
  std::string error;
};

// axis: P, dt or Q (Gauss points per axis, or Monte Carlo node count). Writes sweep.csv
// (value,global_mean,global_var), sweep.json with timings and sweep.svg when `write` is set.
std::vector<SweepPoint> sweep_config(const RunConfig& cfg, const std::string& axis,
                                     const std::vector<double>& values, bool write = true);

}  // namespace fsc
