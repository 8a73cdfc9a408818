#include <doctest.h>

#include <cmath>
#include <cstring>

#include "fsc/error.hpp"
#include "fsc/quadrature.hpp"
#include "fsc/random_function.hpp"

using namespace fsc;

namespace {

double moment(const NodeSet& r, int k) {
  double s = 0;
  for (std::size_t q = 0; q < r.size(); ++q) s += r.weights()[q] * std::pow(r.coord(q, 0), k);
  return s;
}

}  // namespace

TEST_CASE("two-point Legendre rule") {
  auto r = gauss_rule(Distribution::uniform(-1, 1), 2);
  REQUIRE(r->size() == 2);
  CHECK(r->coord(0, 0) == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r->coord(1, 0) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r->weights()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r->weights()[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("low-order exactness") {
  CHECK(std::abs(moment(*gauss_rule(Distribution::uniform(-1, 1), 5), 4) - 0.2) < 1e-14);
  auto h = gauss_rule(Distribution::normal(0, 1), 6);
  CHECK(std::abs(moment(*h, 2) - 1.0) < 1e-12);
  CHECK(std::abs(moment(*h, 4) - 3.0) < 1e-12);
}

TEST_CASE("Gauss exactness up to degree 2n-1 for every law") {
  const Distribution laws[] = {Distribution::uniform(1, 2), Distribution::beta(2, 5, 0.05, 0.25),
                               Distribution::beta(0.5, 3, -1, 1), Distribution::gamma(10, 0.1, 340),
                               Distribution::gamma(2, 3, 0), Distribution::normal(0, 1),
                               Distribution::normal(4, 0.2)};
  for (const auto& d : laws) {
    for (int n : {1, 2, 5, 12, 30}) {
      auto r = gauss_rule(d, n);
      double total = 0;
      for (double w : r->weights()) total += w;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      // Map to the canonical variable of the family, whose moments have simple closed forms
      // and no cancellation.
      const auto& pr = d.params();
      auto canon = [&](double x) {
        switch (d.kind()) {
          case DistKind::Uniform: return (x - pr[0]) / (pr[1] - pr[0]);
          case DistKind::Beta: return (x - pr[2]) / (pr[3] - pr[2]);
          case DistKind::Gamma: return (x - pr[2]) * pr[1];
          case DistKind::Normal: return (x - pr[0]) / pr[1];
        }
        return x;
      };
      auto exact = [&](int k) {
        double v = 1;
        switch (d.kind()) {
          case DistKind::Uniform: return 1.0 / (k + 1);
          case DistKind::Beta:
            for (int i = 0; i < k; ++i) v *= (pr[0] + i) / (pr[0] + pr[1] + i);
            return v;
          case DistKind::Gamma:
            for (int i = 0; i < k; ++i) v *= pr[0] + i;
            return v;
          case DistKind::Normal:
            if (k % 2) return 0.0;
            for (int i = k - 1; i > 0; i -= 2) v *= i;
            return v;
        }
        return v;
      };
      for (int k = 0; k <= std::min(2 * n - 1, 16); ++k) {
        // Odd moments vanish while their terms do not, so scale by E|u|^k.
        double g = 0, mag = 0;
        for (std::size_t q = 0; q < r->size(); ++q) {
          double v = std::pow(canon(r->coord(q, 0)), k);
          g += r->weights()[q] * v;
          mag += r->weights()[q] * std::abs(v);
        }
        INFO(d.describe(), " n=", n, " k=", k);
        CHECK(std::abs(g - exact(k)) <= 1e-11 * std::max(1.0, mag));
      }
    }
  }
}

TEST_CASE("default point counts") {
  CHECK(default_gauss_points(Distribution::uniform(0, 1)) == 100);
  CHECK(default_gauss_points(Distribution::beta(2, 5, 0, 1)) == 80);
  CHECK(default_gauss_points(Distribution::gamma(10, 0.1, 0)) == 140);
  CHECK(default_gauss_points(Distribution::normal(0, 1)) == 110);
}

TEST_CASE("tensor grids") {
  auto a = gauss_rule(Distribution::uniform(-1, 1), 2);
  auto g = tensor_grid({a, a});
  CHECK(g->size() == 4);
  double total = 0;
  for (double w : g->weights()) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

  ProductMeasure ub({Distribution::uniform(150, 450), Distribution::beta(2, 5, 0.05, 0.25)});
  auto full = gauss_grid(ub, {100, 80});
  CHECK(full->size() == 8000);
  CHECK(full->kind() == NodeKind::GaussFullGrid);

  auto single = tensor_grid({a});
  CHECK(single->points() == a->points());
  CHECK(single->weights() == a->weights());

  CHECK_THROWS_AS(tensor_grid({a, a, a, a}), Error);
  ProductMeasure m4({Distribution::uniform(0, 1), Distribution::uniform(0, 1), Distribution::uniform(0, 1),
                     Distribution::uniform(0, 1)});
  try {
    gauss_grid(m4, {2, 2, 2, 2});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionTooLarge);
  }
}

TEST_CASE("tensor integration equals iterated integration for separable integrands") {
  auto r1 = gauss_rule(Distribution::uniform(1, 2), 7);
  auto r2 = gauss_rule(Distribution::beta(2, 5, 0, 1), 9);
  auto g = tensor_grid({r1, r2});
  auto f = [](double x) { return std::exp(x); };
  auto h = [](double y) { return std::cos(3 * y); };
  double tensor = 0;
  for (std::size_t q = 0; q < g->size(); ++q) tensor += g->weights()[q] * f(g->coord(q, 0)) * h(g->coord(q, 1));
  double a = 0, b = 0;
  for (std::size_t q = 0; q < r1->size(); ++q) a += r1->weights()[q] * f(r1->coord(q, 0));
  for (std::size_t q = 0; q < r2->size(); ++q) b += r2->weights()[q] * h(r2->coord(q, 0));
  CHECK(std::abs(tensor - a * b) < 1e-13);
}

TEST_CASE("Monte Carlo nodes") {
  ProductMeasure m({Distribution::beta(2, 5, -1, 1), Distribution::beta(2, 5, -1, 1), Distribution::beta(2, 5, -1, 1),
                    Distribution::uniform(-1, 1), Distribution::uniform(-1, 1)});
  auto n = mc_nodes(m, 100000, 3);
  CHECK(n->size() == 100000);
  CHECK(n->kind() == NodeKind::MonteCarlo);
  for (double w : n->weights()) REQUIRE(w == 1e-5);
  auto one = mc_nodes(m, 1, 3);
  CHECK(one->size() == 1);
  CHECK(one->weights()[0] == 1.0);
  CHECK(mc_nodes(m, 10, 3)->points() == mc_nodes(m, 10, 3)->points());

  ProductMeasure u({Distribution::uniform(-1, 1)});
  auto un = mc_nodes(u, 100000, 11);
  CHECK(std::abs(moment(*un, 2) - 1.0 / 3.0) < 0.01);
}

TEST_CASE("inner products") {
  auto r = gauss_rule(Distribution::uniform(-1, 1), 5);
  auto one = RandomFunction::constant(r, 1.0);
  CHECK(inner(one, one) == doctest::Approx(1.0).epsilon(1e-15));
  auto xi = RandomFunction::from(r, [](const double* x) { return x[0]; });
  CHECK(std::abs(inner(xi, xi, r) - 1.0 / 3.0) < 1e-14);

  // dmu = (3/2) xi^2 dxi on [-1, 1] as a reweighted Legendre rule.
  auto base = gauss_rule(Distribution::uniform(-1, 1), 20);
  auto w = reweight(*base, [](const double* x) { return 3 * x[0] * x[0]; });
  auto p = [&](int k) { return RandomFunction::from(w, [k](const double* x) { return std::pow(x[0], k); }); };
  CHECK(std::abs(inner(p(3), p(5)) - 3.0 / 11.0) < 1e-12);
  CHECK(std::abs(inner(p(2), p(3))) < 1e-15);

  auto other = gauss_rule(Distribution::uniform(-1, 1), 5);
  auto xo = RandomFunction::from(other, [](const double* x) { return x[0]; });
  try {
    inner(xi, xo);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NodeSetMismatch);
  }
  CHECK_THROWS_AS(inner(xi, xi, other), Error);
}

TEST_CASE("inner product summation is deterministic") {
  ProductMeasure m({Distribution::normal(0, 1)});
  auto n = mc_nodes(m, 50000, 5);
  auto f = RandomFunction::from(n, [](const double* x) { return std::sin(x[0]) * 1e3; });
  double a = inner(f, f), b = inner(f, f);
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("node sets reject bad weights") {
  CHECK_THROWS_AS(NodeSet(1, {0.0, 1.0}, {0.5, 0.0}, NodeKind::MonteCarlo), Error);
  CHECK_THROWS_AS(NodeSet(1, {0.0}, {0.5, 0.5}, NodeKind::MonteCarlo), Error);
  CHECK_THROWS_AS(RandomFunction(gauss_rule(Distribution::uniform(0, 1), 2), {1.0, NAN}), Error);
}
