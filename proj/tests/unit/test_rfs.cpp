#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fsc/error.hpp"
#include "fsc/rfs.hpp"

using namespace fsc;

namespace {

// dmu = (3/2) xi^2 dxi on [-1, 1].
NodeSetPtr quadratic_measure_rule() {
  auto base = gauss_rule(Distribution::uniform(-1, 1), 20);
  return reweight(*base, [](const double* x) { return 3 * x[0] * x[0]; });
}

std::vector<RandomFunction> monomials(const NodeSetPtr& n, int top) {
  std::vector<RandomFunction> raw;
  for (int k = 1; k <= top; ++k)
    raw.push_back(RandomFunction::from(n, [k](const double* x) { return std::pow(x[0], k); }));
  return raw;
}

double sup_diff(const double* a, const double* b, std::size_t n) {
  double m = 0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Example polynomials orthogonal under (3/2) xi^2 dxi.
double expected(int j, double x) {
  switch (j) {
    case 1: return x;
    case 2: return x * x - 3.0 / 5.0;
    case 3: return x * x * x - 5.0 / 7.0 * x;
    case 4: return std::pow(x, 4) - 10.0 / 9.0 * x * x + 5.0 / 21.0;
    case 5: return std::pow(x, 5) - 14.0 / 11.0 * std::pow(x, 3) + 35.0 / 99.0 * x;
  }
  return 1.0;
}

// Random but well-conditioned raw functions: Chebyshev polynomials on the node range,
// mixed by a random unit lower-triangular matrix.
std::vector<RandomFunction> random_set(const NodeSetPtr& n, int P, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  double lo = n->coord(0, 0), hi = lo;
  for (std::size_t q = 0; q < n->size(); ++q) {
    lo = std::min(lo, n->coord(q, 0));
    hi = std::max(hi, n->coord(q, 0));
  }
  std::vector<RandomFunction> raw;
  for (int j = 0; j < P; ++j) {
    std::vector<double> c(j + 2);
    for (int i = 0; i <= j; ++i) c[i] = 0.5 * g(gen);
    c[j + 1] = 1.0;
    raw.push_back(RandomFunction::from(n, [=](const double* x) {
      double t = std::clamp(2 * (x[0] - lo) / (hi - lo) - 1, -1.0, 1.0);
      double v = 0;
      for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * std::cos(i * std::acos(t));
      return v;
    }));
  }
  return raw;
}

}  // namespace

TEST_CASE("Gram-Schmidt reproduces the quadratic-measure polynomials") {
  auto n = quadratic_measure_rule();
  Basis b = gram_schmidt(monomials(n, 5));
  REQUIRE(b.size() == 6);
  for (int j = 1; j <= 5; ++j) {
    double err = 0;
    for (std::size_t q = 0; q < n->size(); ++q) err = std::max(err, std::abs(b.values(j)[q] - expected(j, n->coord(q, 0))));
    CHECK(err <= 1e-10);
  }
  // Raw coefficients: Phi_4 = xi^4 = Psi_4 + (10/9) Psi_2 + (3/5 * 10/9 - 5/21) Psi_0.
  CHECK(b.raw_coefficients()(3, 2) == doctest::Approx(10.0 / 9.0).epsilon(1e-12));
  CHECK(b.raw_coefficients()(3, 4) == doctest::Approx(1.0));
}

TEST_CASE("Gram-Schmidt small cases") {
  auto r = gauss_rule(Distribution::uniform(-1, 1), 5);
  auto xi = RandomFunction::from(r, [](const double* x) { return x[0]; });
  Basis b = gram_schmidt({xi});
  CHECK(sup_diff(b.values(1), xi.data(), r->size()) < 1e-15);
  CHECK(b.norm(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(b.norm(0) == 1.0);

  try {
    gram_schmidt({xi * 2.0, xi * 3.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateFunction);
    CHECK(e.index == 1);
  }
  Basis d = gram_schmidt({xi * 2.0, xi * 3.0}, {DependencePolicy::Drop});
  CHECK(d.size() == 2);
  CHECK(d.dropped() == std::vector<int>{1});
}

TEST_CASE("Theorem-1 orthogonalizer with the example covariance") {
  auto n = quadratic_measure_rule();
  auto raw = monomials(n, 5);
  // Moments E[xi^k] = 3 / (k + 3) for even k, zero for odd k.
  auto m = [](int k) { return k % 2 ? 0.0 : 3.0 / (k + 3); };
  CovarianceStats stats;
  stats.mean.resize(5);
  stats.cov.resize(5, 5);
  for (int i = 1; i <= 5; ++i) {
    stats.mean[i - 1] = m(i);
    for (int j = 1; j <= 5; ++j) stats.cov(i - 1, j - 1) = m(i + j) - m(i) * m(j);
  }
  CHECK(stats.cov(0, 0) == doctest::Approx(3.0 / 5.0));
  CHECK(stats.cov(1, 1) == doctest::Approx(12.0 / 175.0));
  CHECK(stats.cov(0, 4) == doctest::Approx(1.0 / 3.0));
  CHECK(stats.cov(2, 4) == doctest::Approx(3.0 / 11.0));
  Basis b = theorem1_orthogonalize(raw, &stats);
  for (int j = 1; j <= 5; ++j) {
    double err = 0;
    for (std::size_t q = 0; q < n->size(); ++q) err = std::max(err, std::abs(b.values(j)[q] - expected(j, n->coord(q, 0))));
    CHECK(err <= 1e-10);
  }
  CovarianceDeterminants det(stats.cov);
  CHECK(std::abs(det.ratio(2, 4) - 10.0 / 9.0) < 1e-12);
  CHECK(std::abs(det.det_delta(2, 4) / det.det_box(2) - 10.0 / 9.0) < 1e-12);

  auto r = gauss_rule(Distribution::uniform(0, 1), 4);
  auto xi = RandomFunction::from(r, [](const double* x) { return x[0]; });
  Basis one = theorem1_orthogonalize({xi});
  for (std::size_t q = 0; q < r->size(); ++q) CHECK(one.values(1)[q] == doctest::Approx(r->coord(q, 0) - 0.5));

  try {
    theorem1_orthogonalize({xi, xi * 2.0 + RandomFunction::constant(r, 1.0)});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularCovariance);
  }
}

TEST_CASE("Theorem-1 agrees with Gram-Schmidt and the proof identities hold") {
  std::mt19937_64 gen(2024);
  auto n = gauss_rule(Distribution::uniform(-1, 1), 200);
  for (int trial = 0; trial < 20; ++trial) {
    int P = 1 + trial % 6;
    auto raw = random_set(n, P, gen);
    Basis gs = gram_schmidt(raw);
    Basis th = theorem1_orthogonalize(raw);
    double scale = 0;
    for (int j = 1; j <= P; ++j) scale = std::max(scale, std::sqrt(gs.norm(j)));
    for (int j = 1; j <= P; ++j) CHECK(sup_diff(gs.values(j), th.values(j), n->size()) <= 1e-9 * std::max(1.0, scale));

    auto stats = covariance_stats(raw);
    CovarianceDeterminants det(stats.cov);
    for (int k = 1; k <= P; ++k) {
      double ups = det.det_box(k) / det.det_box(k - 1);
      CHECK(std::abs(gs.norm(k) - ups) <= 1e-9 * std::abs(ups));
      for (int j = k; j <= P; ++j) {
        double lhs = inner(raw[j - 1], gs.function(k));
        double rhs = det.det_delta(k, j) / det.det_box(k - 1);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(std::abs(rhs), ups));
      }
    }
  }
}

TEST_CASE("orthogonality of both orthogonalizers") {
  std::mt19937_64 gen(7);
  auto n = gauss_rule(Distribution::beta(2, 5, 0, 1), 80);
  auto raw = random_set(n, 6, gen);
  for (const Basis& b : {gram_schmidt(raw), theorem1_orthogonalize(raw)}) {
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        CHECK(std::abs(inner(b.function(i), b.function(j))) <= 1e-8 * std::sqrt(b.norm(i) * b.norm(j)));
    for (std::size_t q = 0; q < n->size(); ++q) REQUIRE(b.values(0)[q] == 1.0);
  }
}

TEST_CASE("projection coefficients") {
  auto n = quadratic_measure_rule();
  Basis b = gram_schmidt(monomials(n, 5));
  auto c2 = project(b, b.function(2));
  for (std::size_t j = 0; j < b.size(); ++j) CHECK(std::abs(c2[j] - (j == 2 ? 1.0 : 0.0)) <= 1e-10);
  auto cc = project(b, RandomFunction::constant(n, 4.5));
  CHECK(cc[0] == doctest::Approx(4.5));
  for (std::size_t j = 1; j < b.size(); ++j) CHECK(std::abs(cc[j]) <= 1e-10);
  auto f = b.function(1) * 2.0 + b.function(3) * 3.0;
  CHECK(std::abs(projection_coeff(b, f, 1) - 2.0) <= 1e-10);
  CHECK(std::abs(projection_coeff(b, f, 3) - 3.0) <= 1e-10);
  CHECK(std::abs(projection_coeff(b, f, 2)) <= 1e-10);
}

TEST_CASE("cost model") {
  for (auto m : {CostMethod::Thm1Known, CostMethod::Thm1Unknown, CostMethod::ClassicGS})
    for (std::uint64_t Q : {1u, 100u, 100000u}) CHECK(cost_model(m, 0, Q) == 0);
  CHECK(cost_model(CostMethod::ClassicGS, 3, 100) == 3295);
  for (std::uint64_t P : {3u, 4u}) {
    CHECK(cost_q_coefficient_x2(CostMethod::ClassicGS, P) * 4 == cost_q_coefficient_x2(CostMethod::Thm1Known, P) * 11);
  }
  // The Q-coefficient of Thm1Known is below ClassicGS's for every P >= 1.
  for (std::uint64_t P = 1; P <= 8; ++P)
    CHECK(cost_q_coefficient_x2(CostMethod::Thm1Known, P) < cost_q_coefficient_x2(CostMethod::ClassicGS, P));
  // Exact integer evaluation of the closed forms.
  auto known = [](double P, double Q) {
    return P * (P + 1) * Q + std::pow(P, 5) / 30 + std::pow(P, 4) / 6 - std::pow(P, 3) / 3 + P * P / 3 - 6 * P / 5 + 1;
  };
  auto unknown = [](double P, double Q) {
    return 3.5 * P * (P + 11.0 / 7.0) * Q + std::pow(P, 5) / 30 + std::pow(P, 4) / 6 - std::pow(P, 3) / 3 - P * P / 6 -
           27 * P / 10 + 1;
  };
  for (std::uint64_t P = 1; P <= 12; ++P) {
    CHECK(static_cast<double>(cost_model(CostMethod::Thm1Known, P, 1000)) == doctest::Approx(known(P, 1000)));
    CHECK(static_cast<double>(cost_model(CostMethod::Thm1Unknown, P, 1000)) == doctest::Approx(unknown(P, 1000)));
  }
}

TEST_CASE("flop counter scales linearly in Q with the predicted coefficient") {
  std::mt19937_64 gen(3);
  for (int P = 3; P <= 8; ++P) {
    std::uint64_t f[2];
    int Qs[2] = {2000, 4000};
    for (int i = 0; i < 2; ++i) {
      auto n = mc_nodes(ProductMeasure({Distribution::uniform(-1, 1)}), Qs[i], 9);
      OpCounter c;
      OrthoOptions o;
      o.counter = &c;
      gram_schmidt(random_set(n, P, gen), o);
      f[i] = c.flops;
    }
    double slope = static_cast<double>(f[1] - f[0]) / (Qs[1] - Qs[0]);
    double predicted = cost_q_coefficient_x2(CostMethod::ClassicGS, P) / 2.0;
    CHECK(std::abs(slope / predicted - 1.0) <= 0.10);
  }
}
