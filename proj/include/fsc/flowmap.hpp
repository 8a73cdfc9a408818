#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fsc/random_function.hpp"

namespace fsc {

// n-th order ODE in explicit form d^n u / dt^n = f(t, xi, s), s = (u, du/dt, ..., d^{n-1}u/dt^{n-1}).
// All evaluators are pointwise in the random input xi and must be pure.
class ExplicitOde {
 public:
  virtual ~ExplicitOde() = default;

  virtual int order() const = 0;
  virtual std::size_t random_dim() const = 0;
  virtual double rhs(double t, const double* xi, const double* s) const = 0;
  virtual void initial_state(const double* xi, double* s) const = 0;

  // Largest m for which total_derivative is implemented analytically; 0 if none.
  virtual int chain_order() const { return 0; }
  // m-th total time derivative of f, given e = (u, ..., d^{n+m-1}u).
  virtual double total_derivative(int m, double t, const double* xi, const double* e) const;

  virtual std::string name() const { return "ode"; }
};

// Adapter for callers that prefer closures to subclassing.
class FunctionalOde : public ExplicitOde {
 public:
  using Rhs = std::function<double(double, const double*, const double*)>;
  using Ic = std::function<void(const double*, double*)>;
  using Chain = std::function<double(int, double, const double*, const double*)>;

  FunctionalOde(int n, std::size_t d, Rhs rhs, Ic ic, Chain chain = {}, int chain_order = 0);

  int order() const override { return n_; }
  std::size_t random_dim() const override { return d_; }
  double rhs(double t, const double* xi, const double* s) const override { return rhs_(t, xi, s); }
  void initial_state(const double* xi, double* s) const override { ic_(xi, s); }
  int chain_order() const override { return chain_ ? chain_order_ : 0; }
  double total_derivative(int m, double t, const double* xi, const double* e) const override;

 private:
  int n_;
  std::size_t d_;
  Rhs rhs_;
  Ic ic_;
  Chain chain_;
  int chain_order_;
};

struct FdOptions {
  double h = 1e-4;
  // Stencils are kept inside [t_min, t_max]; one-sided differences are used at the edges.
  double t_min = 0.0;
  double t_max = std::numeric_limits<double>::infinity();
};

// One classical RK4 step of the pathwise first-order system at a fixed xi.
void rk4_path_step(const ExplicitOde& ode, double t, const double* xi, double* s, double h);

// m-th total time derivative of f along the pathwise trajectory through (t, s), by
// differences of f over RK4-propagated stencil states. Central differences of width
// h * {1, 10, 30} for m = 1, 2, 3 (second order); forward/backward differences near the edges.
double fd_total_derivative(const ExplicitOde& ode, double t, const double* xi, const double* s,
                           int m, const FdOptions& opts = {});
inline constexpr int kMaxFdOrder = 3;

using EnrichedState = std::vector<RandomFunction>;

// Nodal (u, ..., d^{n+M-1}u): the state, then f, then D_t f ... D_t^{M-1} f.
EnrichedState derivative_chain_eval(const ExplicitOde& ode, double t,
                                    const std::vector<RandomFunction>& state, int M,
                                    const FdOptions& fd = {});

// Same on raw arrays: state holds n rows of length Q, out receives n+M rows.
void derivative_chain_eval(const ExplicitOde& ode, double t, const NodeSet& nodes,
                           const double* state, int M, double* out, const FdOptions& fd = {});

// Order-M Taylor push: phi^k = sum_{j=0}^{M} h^j / j! * e^{k+j}, for k < n.
std::vector<RandomFunction> taylor_flow(int n, double h, const EnrichedState& enriched, int M);
// Taylor push of every enriched component, truncated where higher derivatives are unknown.
EnrichedState taylor_flow_enriched(double h, const EnrichedState& enriched);

}  // namespace fsc
