#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fsc/fsc.hpp"

namespace fsc {

// d^n u/dt^n = c(xi) + sum_k a_k(xi) d^{k-1}u/dt^{k-1}. Autonomous, so the chain is
// d^{n+m}u = sum_k a_k d^{m+k-1}u for every m >= 1.
class LinearOde : public ExplicitOde {
 public:
  using Coefficients = std::function<void(const double* xi, double* a, double& c)>;
  using Ic = std::function<void(const double* xi, double* s)>;

  LinearOde(int n, std::size_t d, Coefficients coeffs, Ic ic, std::string name);

  int order() const override { return n_; }
  std::size_t random_dim() const override { return d_; }
  double rhs(double t, const double* xi, const double* s) const override;
  void initial_state(const double* xi, double* s) const override { ic_(xi, s); }
  int chain_order() const override { return 64; }
  double total_derivative(int m, double t, const double* xi, const double* e) const override;
  std::string name() const override { return name_; }

 private:
  int n_;
  std::size_t d_;
  Coefficients coeffs_;
  Ic ic_;
  std::string name_;
};

// m u'' - (1 - rho u^2) c u' + k u = 0 with xi = (c, initial displacement).
class VanDerPolOde : public ExplicitOde {
 public:
  double m = 100.0, rho = 150.0, k = 400.0;
  double v_slope = 2.0, v_offset = -0.10;  // initial velocity = slope * u0 + offset

  int order() const override { return 2; }
  std::size_t random_dim() const override { return 2; }
  double rhs(double t, const double* xi, const double* s) const override;
  void initial_state(const double* xi, double* s) const override;
  int chain_order() const override { return 3; }
  double total_derivative(int mth, double t, const double* xi, const double* e) const override;
  std::string name() const override { return "van-der-pol"; }
};

// Inputs of the parametric problem u'' + k(t,xi) u = f(t,xi) at one point.
struct HighDimPoint {
  double k[4];  // k and its first three time derivatives
  double f[4];
  double u0, v0;
};

HighDimPoint highdim_point(int d, double t, const double* xi);

class HighDimOde : public ExplicitOde {
 public:
  explicit HighDimOde(int d);

  int order() const override { return 2; }
  std::size_t random_dim() const override { return static_cast<std::size_t>(d_); }
  double rhs(double t, const double* xi, const double* s) const override;
  void initial_state(const double* xi, double* s) const override;
  int chain_order() const override { return 3; }
  double total_derivative(int m, double t, const double* xi, const double* e) const override;
  std::string name() const override { return "highdim-" + std::to_string(d_); }

 private:
  int d_;
};

struct ProblemSpec {
  std::string id;       // p1..p6, highdim
  std::string variant;  // distribution selector
  int d = 1;
  std::shared_ptr<const ExplicitOde> ode;
  ProductMeasure measure;
  std::vector<int> responses;
  std::vector<std::string> response_names;
  FscConfig defaults;
  std::vector<int> gauss_points;
  bool requires_monte_carlo = false;
  // Pathwise closed-form response (index into responses) when one exists.
  std::function<double(double t, const double* xi)> exact_response;
};

// id: p1..p6 or highdim; variant: uniform | beta | gamma | normal (per problem); d for highdim.
ProblemSpec make_problem(const std::string& id, const std::string& variant = "", int d = 10);
std::vector<std::string> problem_variants(const std::string& id);

// T^i_{jklm} = <Psi_i, Psi_j Psi_k Psi_l Psit_m> / Upsilon_ii, stored densely.
class MultiplicationTensor {
 public:
  MultiplicationTensor(const Basis& basis, const std::vector<RandomFunction>& input_basis);

  std::size_t width() const { return w_; }
  std::size_t inputs() const { return r_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l, std::size_t m) const {
    return data_[(((i * w_ + j) * w_ + k) * w_ + l) * r_ + m];
  }

 private:
  std::size_t w_, r_;
  std::vector<double> data_;
};

MultiplicationTensor vdp_multiplication_tensor(const Basis& basis,
                                               const std::vector<RandomFunction>& input_basis);
// {1, c - E[c], u0 - E[u0]} on the carrier of `nodes`.
std::vector<RandomFunction> vdp_input_basis(const NodeSetPtr& nodes);

// Second-derivative modes from the tensor form
//   m u''^i = T^i_{j00m} u'^j c^m - rho T^i_{jklm} u'^j u^k u^l c^m - k u^i.
std::vector<double> vdp_tensor_acceleration(const VanDerPolOde& ode, const MultiplicationTensor& T,
                                            const std::vector<double>& u,
                                            const std::vector<double>& v,
                                            const std::vector<double>& c_modes);

struct HighDimInputs {
  RandomFunction k, dk, d2k, d3k, f, df, d2f, d3f, u0, v0;
};
HighDimInputs highdim_inputs(int d, double t, const NodeSetPtr& nodes);

// u''^i = f^i - k^i_j u^j with k^i_j = <Psi_i, k Psi_j> / Upsilon_ii and f^i = <Psi_i, f> / Upsilon_ii.
std::vector<double> highdim_tensor_acceleration(int d, double t, const Basis& basis,
                                                const std::vector<double>& u);

}  // namespace fsc
