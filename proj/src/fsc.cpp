#include "fsc/fsc.hpp"

#include <algorithm>
#include <cmath>

#include "fsc/error.hpp"

namespace fsc {

void validate(const FscConfig& cfg, int n) {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::InvalidParameters, m); };
  if (cfg.M < 1 || cfg.M > 4) bad("flow-map order M must lie in 1..4");
  if (cfg.P < n + 1 || cfg.P > n + cfg.M)
    bad("P = " + std::to_string(cfg.P) + " violates n+1 <= P <= n+M with n = " + std::to_string(n) +
        ", M = " + std::to_string(cfg.M));
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) bad("dt must be positive");
  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) bad("T must be positive");
  if (!(cfg.bootstrap.duration >= 0.0)) bad("bootstrap duration must be >= 0");
  if (!(cfg.tol_drop > 0.0)) bad("tol_drop must be positive");
  if (cfg.midpoint && cfg.transfer == Transfer::FSC2)
    bad("the midpoint basis does not contain the state, so FSC-2 cannot be used with it");
  if (cfg.responses.empty()) bad("at least one response is required");
  for (int r : cfg.responses)
    if (r < 0 || r >= n) bad("response index out of range");
}

int bootstrap_order(const FscConfig& cfg, std::size_t d) {
  if (cfg.bootstrap.order >= 0) return cfg.bootstrap.order;
  int p = 0;
  while (gpc_size(d, p) < 7) ++p;
  return p;
}

std::size_t step_count(const FscConfig& cfg) {
  return static_cast<std::size_t>(std::llround(cfg.T / cfg.dt));
}

std::vector<double> SpectralState::row(int l) const {
  return std::vector<double>(modes.begin() + l * width(), modes.begin() + (l + 1) * width());
}

std::vector<double> SpectralState::nodal() const {
  const std::size_t Q = basis.nodes();
  std::vector<double> out(n * Q);
  for (int l = 0; l < n; ++l) reconstruct_into(modes.data() + l * width(), basis, out.data() + l * Q);
  return out;
}

Basis build_basis(const std::vector<RandomFunction>& raw, Orthogonalizer method, double tol_drop) {
  OrthoOptions opts;
  opts.policy = DependencePolicy::Drop;
  opts.tol_drop = tol_drop;
  Basis b = method == Orthogonalizer::GramSchmidt ? gram_schmidt(raw, opts)
                                                  : theorem1_orthogonalize(raw, nullptr, opts);
  if (b.size() < 2)
    throw Error(ErrorCode::BasisCollapse,
                "every raw function is linearly dependent on the constant; the state is deterministic");
  return b;
}

Basis build_basis(const EnrichedState& enriched, int P, Orthogonalizer method, double tol_drop) {
  if (P < 1 || static_cast<std::size_t>(P) > enriched.size())
    throw Error(ErrorCode::InvalidParameters, "P exceeds the enriched state length");
  std::vector<RandomFunction> raw(enriched.begin(), enriched.begin() + P);
  return build_basis(raw, method, tol_drop);
}

std::vector<double> transfer_fsc1(const SpectralState& old, const Basis& new_basis) {
  require_same_carrier(old.basis.carrier(), new_basis.carrier());
  const std::size_t Q = new_basis.nodes();
  const std::size_t wn = new_basis.size(), wo = old.width();
  // G(j, k) = <Psi_j^new, Psi_k^old> / Upsilon_jj^new
  std::vector<double> G(wn * wo);
  for (std::size_t j = 0; j < wn; ++j) {
    const double* dj = new_basis.dual(j);
    for (std::size_t k = 0; k < wo; ++k) {
      const double* pk = old.basis.values(k);
      double s = 0.0;
      for (std::size_t q = 0; q < Q; ++q) s += dj[q] * pk[q];
      G[j * wo + k] = s;
    }
  }
  std::vector<double> modes(old.n * wn, 0.0);
  for (int l = 0; l < old.n; ++l)
    for (std::size_t j = 0; j < wn; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < wo; ++k) s += G[j * wo + k] * old.mode(l, k);
      modes[l * wn + j] = s;
    }
  return modes;
}

std::vector<double> transfer_fsc2(const Basis& new_basis, int n) {
  const Eigen::MatrixXd& C = new_basis.raw_coefficients();
  if (C.rows() < n || static_cast<std::size_t>(C.cols()) != new_basis.size())
    throw Error(ErrorCode::InvalidParameters, "basis was not built from the state components");
  const std::size_t w = new_basis.size();
  std::vector<double> modes(n * w);
  for (int l = 0; l < n; ++l)
    for (std::size_t j = 0; j < w; ++j) modes[l * w + j] = C(l, static_cast<long>(j));
  return modes;
}

std::vector<double> fsc2_modes_from_stats(const CovarianceStats& stats, int n, std::size_t width) {
  if (static_cast<int>(stats.mean.size()) < n || width < static_cast<std::size_t>(n) + 1)
    throw Error(ErrorCode::InvalidParameters, "statistics must cover the n state components");
  CovarianceDeterminants dets(stats.cov);
  for (int k = 1; k <= n; ++k)
    if (!(dets.det_box(k) > 0.0))
      throw Error(ErrorCode::SingularCovariance, "state covariance block " + std::to_string(k) + " is singular");
  std::vector<double> modes(n * width, 0.0);
  for (int l = 1; l <= n; ++l) {
    double* row = modes.data() + (l - 1) * width;
    row[0] = stats.mean[l - 1];
    for (int j = 1; j < l; ++j) row[j] = dets.ratio(j, l);
    row[l] = 1.0;
  }
  return modes;
}

namespace {

void galerkin_rhs_into(const ExplicitOde& ode, double t, const Basis& basis, int n,
                       const double* modes, double* out, std::vector<double>& nodal,
                       std::vector<double>& fvals) {
  const std::size_t Q = basis.nodes(), w = basis.size();
  const NodeSet& nodes = *basis.carrier();
  nodal.resize(n * Q);
  fvals.resize(Q);
  for (int l = 0; l < n; ++l) reconstruct_into(modes + l * w, basis, nodal.data() + l * Q);
  double s[16];
  for (std::size_t q = 0; q < Q; ++q) {
    for (int l = 0; l < n; ++l) s[l] = nodal[l * Q + q];
    fvals[q] = ode.rhs(t, nodes.point(q), s);
  }
  for (int l = 0; l + 1 < n; ++l) std::copy(modes + (l + 1) * w, modes + (l + 2) * w, out + l * w);
  double* last = out + (n - 1) * w;
  for (std::size_t j = 0; j < w; ++j) {
    const double* d = basis.dual(j);
    double acc = 0.0;
    for (std::size_t q = 0; q < Q; ++q) acc += d[q] * fvals[q];
    last[j] = acc;
  }
  for (std::size_t j = 0; j < w; ++j)
    if (!std::isfinite(last[j]))
      throw Error(ErrorCode::NonfiniteRhs, "Galerkin right-hand side is not finite at t = " + std::to_string(t));
}

}  // namespace

std::vector<double> galerkin_rhs(const ExplicitOde& ode, double t, const SpectralState& state) {
  std::vector<double> out(state.modes.size()), nodal, fvals;
  galerkin_rhs_into(ode, t, state.basis, state.n, state.modes.data(), out.data(), nodal, fvals);
  return out;
}

SpectralState rk4_step(const ExplicitOde& ode, const SpectralState& state, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParameters, "dt must be positive");
  const std::size_t L = state.modes.size();
  std::vector<double> k1(L), k2(L), k3(L), k4(L), y(L), nodal, fvals;
  const double t = state.t;
  const double* y0 = state.modes.data();
  galerkin_rhs_into(ode, t, state.basis, state.n, y0, k1.data(), nodal, fvals);
  for (std::size_t i = 0; i < L; ++i) y[i] = y0[i] + 0.5 * dt * k1[i];
  galerkin_rhs_into(ode, t + 0.5 * dt, state.basis, state.n, y.data(), k2.data(), nodal, fvals);
  for (std::size_t i = 0; i < L; ++i) y[i] = y0[i] + 0.5 * dt * k2[i];
  galerkin_rhs_into(ode, t + 0.5 * dt, state.basis, state.n, y.data(), k3.data(), nodal, fvals);
  for (std::size_t i = 0; i < L; ++i) y[i] = y0[i] + dt * k3[i];
  galerkin_rhs_into(ode, t + dt, state.basis, state.n, y.data(), k4.data(), nodal, fvals);
  SpectralState next = state;
  for (std::size_t i = 0; i < L; ++i) {
    next.modes[i] = y0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(next.modes[i]))
      throw Error(ErrorCode::NonfiniteState, "state became non-finite at t = " + std::to_string(t + dt));
  }
  next.t = t + dt;
  return next;
}

namespace {

void record(const SpectralState& st, const FscConfig& cfg, double t, std::vector<MomentSeries>& out) {
  for (std::size_t r = 0; r < cfg.responses.size(); ++r) {
    auto row = st.row(cfg.responses[r]);
    out[r].times.push_back(t);
    out[r].mean.push_back(row[0]);
    out[r].variance.push_back(std::max(0.0, variance(row, st.basis)));
  }
}

std::vector<double> project_rows(const Basis& basis, const std::vector<double>& nodal, int n) {
  const std::size_t Q = basis.nodes(), w = basis.size();
  std::vector<double> modes(n * w);
  for (int l = 0; l < n; ++l) {
    auto c = project(basis, nodal.data() + l * Q);
    std::copy(c.begin(), c.end(), modes.begin() + l * w);
  }
  return modes;
}

}  // namespace

FscResult run_fsc(const ExplicitOde& ode, const ProductMeasure& measure, const FscConfig& cfg,
                  const NodeSetPtr& nodes, const StepObserver& observer) {
  const int n = ode.order();
  validate(cfg, n);
  if (nodes->dim() != ode.random_dim() || measure.dim() != ode.random_dim())
    throw Error(ErrorCode::InvalidParameters, "node set, measure and ODE disagree on the random dimension");
  const std::size_t Q = nodes->size();
  const std::size_t N = step_count(cfg);

  FscResult res;
  res.series.resize(cfg.responses.size());
  for (std::size_t r = 0; r < cfg.responses.size(); ++r)
    res.series[r].label = "s" + std::to_string(cfg.responses[r]);
  auto& diag = res.diagnostics;
  diag.min_basis_size = static_cast<std::size_t>(-1);

  std::vector<double> nodal(n * Q);
  for (std::size_t q = 0; q < Q; ++q) {
    double s[16];
    ode.initial_state(nodes->point(q), s);
    for (int l = 0; l < n; ++l) nodal[l * Q + q] = s[l];
  }

  SpectralState st;
  st.n = n;
  st.t = 0.0;
  std::size_t i = 0;
  bool have_state = false;

  if (cfg.bootstrap.duration > 0.0) {
    st.basis = gpc_basis(measure, bootstrap_order(cfg, measure.dim()), nodes);
    st.modes = project_rows(st.basis, nodal, n);
    have_state = true;
    record(st, cfg, 0.0, res.series);
    if (observer) observer(0, st);
    while (i < N && static_cast<double>(i) * cfg.dt < cfg.bootstrap.duration - 1e-9 * cfg.dt) {
      st = rk4_step(ode, st, cfg.dt);
      ++i;
      st.t = static_cast<double>(i) * cfg.dt;
      record(st, cfg, st.t, res.series);
      if (observer) observer(i, st);
    }
    diag.bootstrap_end = st.t;
  }

  std::vector<double> enriched((n + cfg.M) * Q);
  for (; i < N; ++i) {
    const double t = static_cast<double>(i) * cfg.dt;
    if (have_state) nodal = st.nodal();
    derivative_chain_eval(ode, t, *nodes, nodal.data(), cfg.M, enriched.data(), cfg.fd);

    EnrichedState raw_all;
    for (int k = 0; k < n + cfg.M; ++k)
      raw_all.emplace_back(nodes, std::vector<double>(enriched.begin() + k * Q, enriched.begin() + (k + 1) * Q));
    if (cfg.midpoint) raw_all = taylor_flow_enriched(0.5 * cfg.dt, raw_all);
    Basis basis;
    bool collapsed = false;
    try {
      basis = build_basis(raw_all, cfg.P, cfg.orthogonalizer, cfg.tol_drop);
    } catch (Error& e) {
      if (e.code() != ErrorCode::BasisCollapse) throw;
      // Every raw function is constant, so the state is deterministic and the constant
      // alone represents it exactly.
      basis = Basis(nodes, std::vector<double>(Q, 1.0), 1);
      collapsed = true;
      ++diag.collapsed_steps;
    }
    diag.min_basis_size = std::min(diag.min_basis_size, basis.size());
    diag.max_basis_size = std::max(diag.max_basis_size, basis.size());
    diag.dropped_total += basis.dropped().size();

    SpectralState next;
    next.n = n;
    next.t = t;
    if (!have_state || collapsed) {
      next.basis = std::move(basis);
      next.modes = project_rows(next.basis, nodal, n);
      if (!have_state) {
        record(next, cfg, t, res.series);
        if (observer) observer(i, next);
      }
    } else {
      next.modes = cfg.transfer == Transfer::FSC2 ? transfer_fsc2(basis, n) : transfer_fsc1(st, basis);
      next.basis = std::move(basis);
      ++diag.resets;
      if (cfg.check_transfer) {
        auto after = next.nodal();
        for (std::size_t k = 0; k < after.size(); ++k)
          diag.max_transfer_defect = std::max(diag.max_transfer_defect, std::abs(after[k] - nodal[k]));
        for (int l = 0; l < n; ++l)
          diag.max_mean_shift = std::max(diag.max_mean_shift, std::abs(next.mode(l, 0) - st.mode(l, 0)));
      }
    }
    have_state = true;
    try {
      st = rk4_step(ode, next, cfg.dt);
    } catch (Error& e) {
      e.index = static_cast<long>(i);
      throw;
    }
    st.t = static_cast<double>(i + 1) * cfg.dt;
    record(st, cfg, st.t, res.series);
    if (observer) observer(i + 1, st);
  }
  if (diag.min_basis_size == static_cast<std::size_t>(-1)) diag.min_basis_size = 0;
  return res;
}

}  // namespace fsc
