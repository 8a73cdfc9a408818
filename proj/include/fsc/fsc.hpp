#pragma once

#include <functional>
#include <vector>

#include "fsc/distributions.hpp"
#include "fsc/flowmap.hpp"
#include "fsc/rfs.hpp"
#include "fsc/spectral.hpp"

namespace fsc {

enum class Transfer { FSC1, FSC2 };
enum class Orthogonalizer { GramSchmidt, Theorem1 };

struct BootstrapConfig {
  // Total gPC order; negative selects the smallest order giving at least 7 basis functions.
  int order = -1;
  double duration = 1.0;
};

struct FscConfig {
  int P = 6;
  int M = 4;
  Transfer transfer = Transfer::FSC2;
  double dt = 1e-3;
  double T = 10.0;
  BootstrapConfig bootstrap;
  Orthogonalizer orthogonalizer = Orthogonalizer::GramSchmidt;
  // Build raw functions from the flow map pushed to the middle of the step instead of t_i.
  bool midpoint = false;
  double tol_drop = 1e-12;
  FdOptions fd;
  // State components whose moments are recorded (0 = u, 1 = du/dt, ...).
  std::vector<int> responses{0};
  // Measure the nodal state change across every transfer.
  bool check_transfer = false;
};

// Throws InvalidParameters when the configuration violates n+1 <= P <= n+M or other bounds.
void validate(const FscConfig& cfg, int n);
int bootstrap_order(const FscConfig& cfg, std::size_t d);
std::size_t step_count(const FscConfig& cfg);

// Modes of the n state components over the active basis, row-major n x (P+1).
struct SpectralState {
  double t = 0.0;
  int n = 1;
  Basis basis;
  std::vector<double> modes;

  std::size_t width() const { return basis.size(); }
  double mode(int l, std::size_t j) const { return modes[l * width() + j]; }
  std::vector<double> row(int l) const;
  // Nodal values of all components, n rows of length Q.
  std::vector<double> nodal() const;
};

// Orthogonal basis from {1, raw_1, ..., raw_P}, dropping linearly dependent raw functions.
Basis build_basis(const std::vector<RandomFunction>& raw, Orthogonalizer method, double tol_drop = 1e-12);
// Uses the first P components of the enriched state.
Basis build_basis(const EnrichedState& enriched, int P, Orthogonalizer method,
                  double tol_drop = 1e-12);

// Mean-square projection of the old modes onto the new basis.
std::vector<double> transfer_fsc1(const SpectralState& old, const Basis& new_basis);
// Exact transfer for a basis built from the state itself: row l is the expansion of raw
// function l recorded while orthogonalizing.
std::vector<double> transfer_fsc2(const Basis& new_basis, int n);
// Closed form from state statistics: row l = (E[s^l], det Delta_j(l) / det Box_j for 0<j<l, 1, 0...).
std::vector<double> fsc2_modes_from_stats(const CovarianceStats& stats, int n, std::size_t width);

// Time derivative of the modes by pseudo-spectral projection of f on the reconstructed state.
std::vector<double> galerkin_rhs(const ExplicitOde& ode, double t, const SpectralState& state);

SpectralState rk4_step(const ExplicitOde& ode, const SpectralState& state, double dt);

struct FscDiagnostics {
  std::size_t resets = 0;
  double max_transfer_defect = 0.0;  // sup-norm of nodal state change across a transfer
  double max_mean_shift = 0.0;       // largest change of a j=0 mode across a transfer
  std::size_t min_basis_size = 0;
  std::size_t max_basis_size = 0;
  std::size_t dropped_total = 0;
  double bootstrap_end = 0.0;
  // Steps whose raw functions were all constant; the constant basis was used alone.
  std::size_t collapsed_steps = 0;
};

struct FscResult {
  std::vector<MomentSeries> series;
  FscDiagnostics diagnostics;
};

using StepObserver = std::function<void(std::size_t step, const SpectralState& state)>;

// gPC bootstrap, then per step: enriched state, new basis, transfer, RK4.
FscResult run_fsc(const ExplicitOde& ode, const ProductMeasure& measure, const FscConfig& cfg,
                  const NodeSetPtr& nodes, const StepObserver& observer = {});

}  // namespace fsc
