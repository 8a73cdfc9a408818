#include "fsc/flowmap.hpp"

#include <cmath>

#include "fsc/error.hpp"

namespace fsc {

double ExplicitOde::total_derivative(int m, double, const double*, const double*) const {
  throw Error(ErrorCode::ChainUnavailable,
              "no analytic chain for D_t^" + std::to_string(m) + " f in " + name());
}

FunctionalOde::FunctionalOde(int n, std::size_t d, Rhs rhs, Ic ic, Chain chain, int chain_order)
    : n_(n), d_(d), rhs_(std::move(rhs)), ic_(std::move(ic)), chain_(std::move(chain)),
      chain_order_(chain_order) {
  if (n_ < 1) throw Error(ErrorCode::InvalidParameters, "ODE order must be >= 1");
  if (!rhs_ || !ic_) throw Error(ErrorCode::InvalidParameters, "ODE needs rhs and initial state");
}

double FunctionalOde::total_derivative(int m, double t, const double* xi, const double* e) const {
  if (!chain_ || m > chain_order_) return ExplicitOde::total_derivative(m, t, xi, e);
  return chain_(m, t, xi, e);
}

void rk4_path_step(const ExplicitOde& ode, double t, const double* xi, double* s, double h) {
  const int n = ode.order();
  double k[4][16], tmp[16];
  auto deriv = [&](double tt, const double* y, double* dy) {
    for (int i = 0; i + 1 < n; ++i) dy[i] = y[i + 1];
    dy[n - 1] = ode.rhs(tt, xi, y);
  };
  deriv(t, s, k[0]);
  for (int i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * h * k[0][i];
  deriv(t + 0.5 * h, tmp, k[1]);
  for (int i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * h * k[1][i];
  deriv(t + 0.5 * h, tmp, k[2]);
  for (int i = 0; i < n; ++i) tmp[i] = s[i] + h * k[2][i];
  deriv(t + h, tmp, k[3]);
  for (int i = 0; i < n; ++i) s[i] += h / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
}

namespace {

constexpr double kFdWidthFactor[4] = {0.0, 1.0, 10.0, 20.0};

// Finite-difference weights on integer offsets; result is sum w_i f(t + o_i h) / (den h^m).
struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;
  double den;
};

// First derivative is second order; the wider higher-order stencils are fourth order so
// truncation stays below the chain tolerance at their larger widths.
Stencil central(int m) {
  switch (m) {
    case 1:
      return {{-1, 1}, {-1.0, 1.0}, 2.0};
    case 2:
      return {{-2, -1, 0, 1, 2}, {-1.0, 16.0, -30.0, 16.0, -1.0}, 12.0};
    default:
      return {{-3, -2, -1, 1, 2, 3}, {1.0, -8.0, 13.0, -13.0, 8.0, -1.0}, 8.0};
  }
}

// Second-order one-sided stencils; `dir` = +1 forward, -1 backward.
Stencil one_sided(int m, int dir) {
  Stencil s;
  switch (m) {
    case 1:
      s = {{0, 1, 2}, {-3.0, 4.0, -1.0}, 2.0};
      break;
    case 2:
      s = {{0, 1, 2, 3}, {2.0, -5.0, 4.0, -1.0}, 1.0};
      break;
    default:
      s = {{0, 1, 2, 3, 4}, {-5.0, 18.0, -24.0, 14.0, -3.0}, 2.0};
      break;
  }
  if (dir < 0) {
    for (auto& o : s.offsets) o = -o;
    // Odd derivatives flip sign under reflection.
    if (m % 2 == 1)
      for (auto& w : s.weights) w = -w;
  }
  return s;
}

}  // namespace

double fd_total_derivative(const ExplicitOde& ode, double t, const double* xi, const double* s,
                           int m, const FdOptions& opts) {
  if (m < 1 || m > kMaxFdOrder)
    throw Error(ErrorCode::ChainUnavailable,
                "finite differences support D_t^m f only for 1 <= m <= " + std::to_string(kMaxFdOrder));
  const int n = ode.order();
  const double h = opts.h * kFdWidthFactor[m];
  Stencil st = central(m);
  const int reach = st.offsets.back();
  if (t - reach * h < opts.t_min)
    st = one_sided(m, +1);
  else if (t + reach * h > opts.t_max)
    st = one_sided(m, -1);

  int lo = 0, hi = 0;
  for (int o : st.offsets) {
    lo = std::min(lo, o);
    hi = std::max(hi, o);
  }
  // f at every integer offset in [lo, hi], states propagated step by step from t.
  std::vector<double> fval(hi - lo + 1);
  double y[16];
  for (int i = 0; i < n; ++i) y[i] = s[i];
  fval[-lo] = ode.rhs(t, xi, y);
  for (int o = 1; o <= hi; ++o) {
    rk4_path_step(ode, t + (o - 1) * h, xi, y, h);
    fval[o - lo] = ode.rhs(t + o * h, xi, y);
  }
  for (int i = 0; i < n; ++i) y[i] = s[i];
  for (int o = -1; o >= lo; --o) {
    rk4_path_step(ode, t + (o + 1) * h, xi, y, -h);
    fval[o - lo] = ode.rhs(t + o * h, xi, y);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < st.offsets.size(); ++i) acc += st.weights[i] * fval[st.offsets[i] - lo];
  return acc / (st.den * std::pow(h, m));
}

void derivative_chain_eval(const ExplicitOde& ode, double t, const NodeSet& nodes,
                           const double* state, int M, double* out, const FdOptions& fd) {
  const int n = ode.order();
  const std::size_t Q = nodes.size();
  if (M < 1) throw Error(ErrorCode::InvalidParameters, "flow-map order M must be >= 1");
  if (n + M > 16) throw Error(ErrorCode::InvalidParameters, "enriched state too long");
  const int analytic = ode.chain_order();
  if (M - 1 > std::max(analytic, kMaxFdOrder))
    throw Error(ErrorCode::ChainUnavailable,
                "D_t^" + std::to_string(M - 1) + " f needs a derivative chain");
  double e[16];
  for (std::size_t q = 0; q < Q; ++q) {
    const double* xi = nodes.point(q);
    for (int l = 0; l < n; ++l) e[l] = state[l * Q + q];
    e[n] = ode.rhs(t, xi, e);
    for (int m = 1; m < M; ++m)
      e[n + m] = m <= analytic ? ode.total_derivative(m, t, xi, e)
                               : fd_total_derivative(ode, t, xi, e, m, fd);
    for (int k = 0; k < n + M; ++k) {
      if (!std::isfinite(e[k])) {
        Error err(ErrorCode::NonfiniteDerivative,
                  "enriched component " + std::to_string(k) + " is not finite at node " +
                      std::to_string(q) + ", t = " + std::to_string(t));
        err.index = static_cast<long>(q);
        throw err;
      }
      out[k * Q + q] = e[k];
    }
  }
}

EnrichedState derivative_chain_eval(const ExplicitOde& ode, double t,
                                    const std::vector<RandomFunction>& state, int M,
                                    const FdOptions& fd) {
  const int n = ode.order();
  if (static_cast<int>(state.size()) != n)
    throw Error(ErrorCode::InvalidParameters, "state must have n components");
  const NodeSetPtr& nodes = state.front().carrier();
  for (const auto& s : state) require_same_carrier(nodes, s.carrier());
  const std::size_t Q = nodes->size();
  std::vector<double> flat(n * Q), out((n + M) * Q);
  for (int l = 0; l < n; ++l) std::copy(state[l].values().begin(), state[l].values().end(), flat.begin() + l * Q);
  derivative_chain_eval(ode, t, *nodes, flat.data(), M, out.data(), fd);
  EnrichedState e;
  for (int k = 0; k < n + M; ++k)
    e.emplace_back(nodes, std::vector<double>(out.begin() + k * Q, out.begin() + (k + 1) * Q));
  return e;
}

std::vector<RandomFunction> taylor_flow(int n, double h, const EnrichedState& enriched, int M) {
  if (static_cast<int>(enriched.size()) < n + M)
    throw Error(ErrorCode::InvalidParameters, "enriched state shorter than n + M");
  std::vector<RandomFunction> out;
  const std::size_t Q = enriched.front().size();
  for (int k = 0; k < n; ++k) {
    std::vector<double> v(Q, 0.0);
    double c = 1.0;
    for (int j = 0; j <= M; ++j) {
      if (j > 0) c *= h / j;
      const auto& e = enriched[k + j];
      for (std::size_t q = 0; q < Q; ++q) v[q] += c * e[q];
    }
    out.emplace_back(enriched.front().carrier(), std::move(v));
  }
  return out;
}

EnrichedState taylor_flow_enriched(double h, const EnrichedState& enriched) {
  EnrichedState out;
  const std::size_t L = enriched.size();
  const std::size_t Q = enriched.front().size();
  for (std::size_t k = 0; k < L; ++k) {
    std::vector<double> v(Q, 0.0);
    double c = 1.0;
    for (std::size_t j = 0; k + j < L; ++j) {
      if (j > 0) c *= h / static_cast<double>(j);
      const auto& e = enriched[k + j];
      for (std::size_t q = 0; q < Q; ++q) v[q] += c * e[q];
    }
    out.emplace_back(enriched.front().carrier(), std::move(v));
  }
  return out;
}

}  // namespace fsc
