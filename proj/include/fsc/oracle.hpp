#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsc/problems.hpp"

namespace fsc {

enum class ReferenceKind { ClosedForm, DenseQuadrature, MonteCarlo };
const char* to_string(ReferenceKind k);

// Tensor Gauss rule with `per_axis` points in every direction.
NodeSetPtr dense_rule(const ProblemSpec& problem, int per_axis = 400);

// Moments of the pathwise closed-form response (P1-P3) integrated on `rule`.
MomentSeries closed_form_moments(const ProblemSpec& problem, const std::vector<double>& times,
                                 const NodeSetPtr& rule);

// Moments from pathwise RK4 at every node of `rule`, substepping dt_out by `substeps`.
MomentSeries dense_path_moments(const ProblemSpec& problem, const NodeSetPtr& rule, double dt_out,
                                double T, int substeps = 10, int response = 0);

struct McReference {
  MomentSeries series;
  std::vector<double> se_mean;  // standard error of the sample mean
  std::vector<double> se_var;   // standard error of the sample variance
  std::size_t realizations = 0;
};

// Pathwise RK4 on `realizations` sampled inputs, starting at sample index `first` of the
// seeded stream. Realizations are processed in fixed-size chunks whose partial moments are
// merged in chunk order.
McReference mc_reference(const ProblemSpec& problem, std::size_t realizations, double dt, double T,
                         std::uint64_t seed, int response = 0, std::size_t first = 0);

struct ErrorReport {
  std::vector<double> times;
  std::vector<double> eps_mean;
  std::vector<double> eps_var;
  double global_mean = 0.0;
  double global_var = 0.0;
  ReferenceKind reference = ReferenceKind::ClosedForm;
  std::size_t mc_realizations = 0;
  bool interpolated = false;
};

// Local errors |f - f_ref| on the test grid and the global error (dt / T) sum_{i=0}^{N} eps(t_i),
// with all N+1 samples included. The reference is linearly interpolated when grids differ.
ErrorReport error_metrics(const MomentSeries& test, const MomentSeries& reference,
                          ReferenceKind kind = ReferenceKind::ClosedForm);
double global_error(const std::vector<double>& local, double dt, double T);

}  // namespace fsc
