#include <doctest.h>

#include <cmath>

#include "fsc/error.hpp"
#include "fsc/flowmap.hpp"
#include "fsc/problems.hpp"

using namespace fsc;

namespace {

std::vector<RandomFunction> state_at(const ExplicitOde& ode, const NodeSetPtr& n, double t) {
  const int order = ode.order();
  std::vector<std::vector<double>> rows(order, std::vector<double>(n->size()));
  for (std::size_t q = 0; q < n->size(); ++q) {
    double s[8];
    ode.initial_state(n->point(q), s);
    const int steps = static_cast<int>(std::lround(t / 1e-3));
    for (int i = 0; i < steps; ++i) rk4_path_step(ode, i * 1e-3, n->point(q), s, 1e-3);
    for (int l = 0; l < order; ++l) rows[l][q] = s[l];
  }
  std::vector<RandomFunction> out;
  for (auto& r : rows) out.emplace_back(n, r);
  return out;
}

}  // namespace

TEST_CASE("linear second-order chain reduces to the stiffness term") {
  auto p = make_problem("p2", "uniform");
  auto n = gauss_grid(p.measure, {7});
  auto st = state_at(*p.ode, n, 0.7);
  auto e = derivative_chain_eval(*p.ode, 0.7, st, 4);
  REQUIRE(e.size() == 6);
  for (std::size_t q = 0; q < n->size(); ++q) {
    double w2 = n->coord(q, 0) / 100.0;
    CHECK(e[2][q] == doctest::Approx(-w2 * st[0][q]).epsilon(1e-14));
    CHECK(e[3][q] == doctest::Approx(-w2 * st[1][q]).epsilon(1e-14));
    CHECK(e[4][q] == doctest::Approx(w2 * w2 * st[0][q]).epsilon(1e-14));
  }
}

TEST_CASE("Van der Pol chain against differences along the trajectory") {
  auto p = make_problem("p6");
  auto n = gauss_grid(p.measure, {4, 4});
  const double t = 0.5, h = 1e-3;
  auto st = state_at(*p.ode, n, t);
  auto e = derivative_chain_eval(*p.ode, t, st, 4);
  for (std::size_t q = 0; q < n->size(); ++q) {
    const double* xi = n->point(q);
    double s[2] = {st[0][q], st[1][q]};
    auto acc = [&](double dt) {
      double x[2] = {s[0], s[1]};
      rk4_path_step(*p.ode, t, xi, x, dt);
      return p.ode->rhs(t + dt, xi, x);
    };
    // Richardson-extrapolated central difference, fourth order in h.
    auto cd = [&](double hh) { return (acc(hh) - acc(-hh)) / (2 * hh); };
    double fd = (4 * cd(h / 2) - cd(h)) / 3;
    CHECK(std::abs(e[3][q] - fd) <= 1e-9 * std::max(1.0, std::abs(fd)));
    // The generic difference fallback agrees with every analytic order.
    for (int m = 1; m <= 3; ++m) {
      double generic = fd_total_derivative(*p.ode, t, xi, s, m);
      double tol = 1e-6 * std::max(1.0, std::abs(e[2 + m][q]));
      INFO("m=", m, " node ", q);
      CHECK(std::abs(generic - e[2 + m][q]) <= tol);
    }
  }
}

TEST_CASE("every analytic chain matches the difference fallback along trajectories") {
  for (auto [id, variant] : std::vector<std::pair<std::string, std::string>>{
           {"p1", "uniform"}, {"p2", "gamma"}, {"p3", "beta"}, {"p4", "normal"}, {"p5", "uniform"}}) {
    auto p = make_problem(id, variant);
    std::vector<int> pts(p.measure.dim(), 3);
    auto n = gauss_grid(p.measure, pts);
    auto st = state_at(*p.ode, n, 0.4);
    auto e = derivative_chain_eval(*p.ode, 0.4, st, 4);
    const int order = p.ode->order();
    for (std::size_t q = 0; q < n->size(); ++q) {
      std::vector<double> s(order);
      for (int l = 0; l < order; ++l) s[l] = st[l][q];
      for (int m = 1; m <= 3; ++m) {
        double generic = fd_total_derivative(*p.ode, 0.4, n->point(q), s.data(), m);
        INFO(id, " m=", m);
        CHECK(std::abs(generic - e[order + m][q]) <= 1e-6 * std::max(1.0, std::abs(e[order + m][q])));
      }
    }
  }
}

TEST_CASE("high-dimensional chain matches the difference fallback") {
  HighDimOde ode(10);
  ProductMeasure m = make_problem("highdim", "", 10).measure;
  auto n = mc_nodes(m, 5, 1);
  auto st = state_at(ode, n, 0.8);
  auto e = derivative_chain_eval(ode, 0.8, st, 4);
  for (std::size_t q = 0; q < n->size(); ++q) {
    double s[2] = {st[0][q], st[1][q]};
    for (int mth = 1; mth <= 3; ++mth) {
      double generic = fd_total_derivative(ode, 0.8, n->point(q), s, mth);
      CHECK(std::abs(generic - e[2 + mth][q]) <= 1e-6 * std::max(1.0, std::abs(e[2 + mth][q])));
    }
  }
}

TEST_CASE("constant right-hand side has vanishing derivatives") {
  FunctionalOde c(1, 1, [](double, const double*, const double*) { return 2.5; },
                  [](const double*, double* s) { s[0] = 1.0; });
  auto n = gauss_rule(Distribution::uniform(0, 1), 3);
  auto e = derivative_chain_eval(c, 0.0, {RandomFunction::constant(n, 1.0)}, 4);
  for (std::size_t q = 0; q < n->size(); ++q) {
    CHECK(e[1][q] == 2.5);
    for (int m = 2; m <= 4; ++m) CHECK(std::abs(e[m][q]) < 1e-9);
  }
  double x = 0.3, s = 1.0;
  CHECK(std::abs(fd_total_derivative(c, 1.0, &x, &s, 1)) < 1e-9);
}

TEST_CASE("difference fallback is second order, also at the left edge") {
  // u' = -k u + sin(t): D_t f is known in closed form along the path.
  FunctionalOde ode(1, 1, [](double t, const double* xi, const double* s) { return -xi[0] * s[0] + std::sin(t); },
                    [](const double*, double* s) { s[0] = 1.0; });
  double k = 1.3, u = 0.8;
  auto exact = [&](double t) {
    double f = -k * u + std::sin(t);
    return -k * f + std::cos(t);
  };
  for (double t : {0.5, 0.0}) {
    double err[2];
    double hs[2] = {1e-3, 5e-4};
    for (int i = 0; i < 2; ++i) {
      FdOptions o;
      o.h = hs[i];
      err[i] = std::abs(fd_total_derivative(ode, t, &k, &u, 1, o) - exact(t));
    }
    double order = std::log(err[0] / err[1]) / std::log(2.0);
    INFO("t=", t, " errors ", err[0], " ", err[1]);
    CHECK(order >= 1.9);
  }
}

TEST_CASE("chain availability") {
  FunctionalOde ode(1, 1, [](double, const double*, const double* s) { return -s[0]; },
                    [](const double*, double* s) { s[0] = 1.0; });
  auto n = gauss_rule(Distribution::uniform(0, 1), 2);
  try {
    derivative_chain_eval(ode, 0.0, {RandomFunction::constant(n, 1.0)}, 5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ChainUnavailable);
  }
  FunctionalOde blow(1, 1, [](double, const double*, const double* s) { return 1.0 / (s[0] - 1.0); },
                     [](const double*, double* s) { s[0] = 1.0; });
  try {
    derivative_chain_eval(blow, 0.0, {RandomFunction::constant(n, 1.0)}, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonfiniteDerivative);
  }
}

TEST_CASE("Taylor flow") {
  auto p = make_problem("p1", "uniform");
  auto n = gauss_grid(p.measure, {5});
  auto st = state_at(*p.ode, n, 0.3);
  auto e = derivative_chain_eval(*p.ode, 0.3, st, 4);
  auto same = taylor_flow(1, 0.0, e, 4);
  for (std::size_t q = 0; q < n->size(); ++q) CHECK(same[0][q] == st[0][q]);
  auto pushed = taylor_flow(1, 1e-3, e, 4);
  for (std::size_t q = 0; q < n->size(); ++q) {
    double s = st[0][q];
    rk4_path_step(*p.ode, 0.3, n->point(q), &s, 1e-3);
    CHECK(std::abs(pushed[0][q] - s) <= 1e-12);
  }

  const double lambda = -0.7, h = 0.2;
  FunctionalOde lin(1, 1, [=](double, const double*, const double* s) { return lambda * s[0]; },
                    [](const double*, double* s) { s[0] = 1.0; },
                    [=](int m, double, const double*, const double* e) { return lambda * e[m]; }, 8);
  auto one = gauss_rule(Distribution::uniform(0, 1), 1);
  auto le = derivative_chain_eval(lin, 0.0, {RandomFunction::constant(one, 2.0)}, 4);
  double series = 0, term = 1;
  for (int j = 0; j <= 4; ++j) {
    series += term;
    term *= lambda * h / (j + 1);
  }
  CHECK(taylor_flow(1, h, le, 4)[0][0] == doctest::Approx(2.0 * series).epsilon(1e-15));
}
