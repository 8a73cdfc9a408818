#include <doctest.h>

#include <cmath>

#include "fsc/distributions.hpp"
#include "fsc/error.hpp"
#include "fsc/quadrature.hpp"
#include "fsc/rng.hpp"

using namespace fsc;

TEST_CASE("philox known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter stream uniforms stay in the open unit interval") {
  CounterStream s(42, 0, 0);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 10000 - 0.5) < 0.02);
}

TEST_CASE("densities") {
  CHECK(Distribution::uniform(1, 2).density(1.5) == doctest::Approx(1.0));
  CHECK(Distribution::uniform(1, 2).density(0.5) == 0.0);
  CHECK(Distribution::beta(2, 5, 0, 1).density(0.5) == doctest::Approx(0.9375).epsilon(1e-14));
  CHECK(Distribution::gamma(10, 0.1, 340).density(339.0) == 0.0);
  CHECK(Distribution::normal(0, 1).density(0.0) == doctest::Approx(1.0 / std::sqrt(2 * M_PI)));
}

TEST_CASE("invalid parameters are rejected at construction") {
  CHECK_THROWS_AS(Distribution::uniform(2, 1), Error);
  CHECK_THROWS_AS(Distribution::beta(0, 5, 0, 1), Error);
  CHECK_THROWS_AS(Distribution::beta(2, 5, 1, 1), Error);
  CHECK_THROWS_AS(Distribution::gamma(1, -1, 0), Error);
  CHECK_THROWS_AS(Distribution::normal(0, 0), Error);
  CHECK_THROWS_AS(ProductMeasure(std::vector<Distribution>{}), Error);
  try {
    Distribution::normal(0, -1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParameters);
  }
}

TEST_CASE("densities integrate to one on a 200-point matching rule") {
  // Integrate f / (law density) against the law's own rule is trivial, so integrate the
  // density against a rule of a different law with the same support.
  auto check = [](const Distribution& d, const Distribution& carrier) {
    auto rule = gauss_rule(carrier, 200);
    double s = 0;
    for (std::size_t q = 0; q < rule->size(); ++q) {
      double x = rule->coord(q, 0);
      double c = carrier.density(x);
      if (c > 0) s += rule->weights()[q] * d.density(x) / c;  // far tail nodes underflow
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  };
  check(Distribution::uniform(1, 2), Distribution::uniform(1, 2));
  check(Distribution::beta(2, 5, 0.05, 0.25), Distribution::uniform(0.05, 0.25));
  check(Distribution::beta(2, 5, 340, 460), Distribution::uniform(340, 460));
  check(Distribution::gamma(10, 0.1, 340), Distribution::gamma(1, 0.05, 340));
  check(Distribution::normal(2.5, 0.125), Distribution::normal(2.5, 0.25));
}

TEST_CASE("raw moments match quadrature") {
  for (const auto& d : {Distribution::uniform(-1, 1), Distribution::beta(2, 5, 3, 5),
                        Distribution::gamma(3, 2, 1), Distribution::normal(4, 0.2)}) {
    CHECK(d.raw_moment(0) == doctest::Approx(1.0));
    CHECK(d.raw_moment(1) == doctest::Approx(d.mean()).epsilon(1e-14));
    CHECK(d.raw_moment(2) - d.mean() * d.mean() == doctest::Approx(d.variance()).epsilon(1e-10));
  }
  CHECK(Distribution::beta(2, 5, 0, 1).mean() == doctest::Approx(2.0 / 7.0));
  CHECK(Distribution::gamma(10, 0.1, 340).mean() == doctest::Approx(440.0));
}

TEST_CASE("sampling") {
  ProductMeasure sq({Distribution::uniform(-1, 1), Distribution::uniform(-1, 1)});
  auto a = sample(sq, 4, 7);
  auto b = sample(sq, 4, 7);
  CHECK(a == b);
  CHECK(a.size() == 8);
  for (double x : a) CHECK(std::abs(x) <= 1.0);
  // Any subrange regenerates on its own.
  auto tail = sample(sq, 2, 7, 2);
  CHECK(std::equal(tail.begin(), tail.end(), a.begin() + 4));

  auto mean_of = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  CHECK(std::abs(mean_of(sample(ProductMeasure({Distribution::normal(0, 1)}), 100000, 1))) <
        3.0 / std::sqrt(1e5));
  CHECK(std::abs(mean_of(sample(ProductMeasure({Distribution::beta(2, 5, 0, 1)}), 100000, 2)) - 2.0 / 7.0) <
        0.005);
  auto g = sample(ProductMeasure({Distribution::gamma(0.5, 2, 1)}), 100000, 3);
  CHECK(std::abs(mean_of(g) - 1.25) < 4 * std::sqrt(0.125 / 1e5));
  for (double x : g) REQUIRE(x >= 1.0);
}

TEST_CASE("distribution config spelling") {
  CHECK(parse_distribution("uniform(a=1,b=2)") == Distribution::uniform(1, 2));
  CHECK(parse_distribution("beta(alpha=2,beta=5,a=0.05,b=0.25)") == Distribution::beta(2, 5, 0.05, 0.25));
  CHECK(parse_distribution("gamma(alpha=10, beta=0.1, a=340)") == Distribution::gamma(10, 0.1, 340));
  CHECK(parse_distribution("normal(mu=0,sigma=1)") == Distribution::normal(0, 1));
  CHECK_THROWS_AS(parse_distribution("cauchy(x0=0)"), Error);
  CHECK_THROWS_AS(parse_distribution("uniform(a=1)"), Error);
}
