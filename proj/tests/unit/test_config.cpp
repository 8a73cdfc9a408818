#include <doctest.h>

#include "fsc/config.hpp"
#include "fsc/error.hpp"
#include "fsc/report.hpp"

using namespace fsc;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NumericalFailure;  // sentinel: parsed fine
}

}  // namespace

TEST_CASE("problem defaults fill the configuration") {
  RunConfig c = parse_config("[problem]\nid = p5\nvariant = normal\n");
  CHECK(c.fsc.P == 8);
  CHECK(c.fsc.responses == std::vector<int>{3});
  CHECK(c.quadrature.kind == QuadratureSpec::Kind::Gauss);
  RunConfig h = parse_config("[problem]\nproblem = \"highdim\"\nd = 7\n");
  CHECK(h.quadrature.kind == QuadratureSpec::Kind::MonteCarlo);
  CHECK(h.fsc.P == 3);
  CHECK(h.oracle.kind == "mc");
}

TEST_CASE("overrides and dump round trip") {
  RunConfig c = parse_config(R"(
[problem]
id = p3
variant = beta
[fsc]
P = 5
transfer = fsc1
dt = 2e-3
orthogonalizer = theorem1
bootstrap_order = 4
[quadrature]
rule = gauss(points_per_dim=[30,20])
[oracle]
kind = dense
dense_points = 50
[output]
dir = somewhere
plots = false
)");
  CHECK(c.fsc.P == 5);
  CHECK(c.fsc.transfer == Transfer::FSC1);
  CHECK(c.fsc.dt == 2e-3);
  CHECK(c.fsc.orthogonalizer == Orthogonalizer::Theorem1);
  CHECK(c.fsc.bootstrap.order == 4);
  CHECK(c.quadrature.points_per_dim == std::vector<int>{30, 20});
  CHECK(c.oracle.dense_points == 50);
  CHECK(!c.plots);
  std::string text = dump_config(c);
  CHECK(dump_config(parse_config(text)) == text);
}

TEST_CASE("configuration errors") {
  CHECK(code_of("[problem]\nid = p2\n") == ErrorCode::NumericalFailure);
  CHECK(code_of("[problem\nid = p2\n") == ErrorCode::ConfigError);
  CHECK(code_of("[problem]\nid = p2\ncolour = red\n") == ErrorCode::ConfigError);
  CHECK(code_of("[bogus]\nx = 1\n") == ErrorCode::ConfigError);
  CHECK(code_of("[problem]\nid = p9\n") == ErrorCode::ConfigError);
  CHECK(code_of("[problem]\nid = p2\n[fsc]\nP = 9\n") == ErrorCode::ConfigError);
  CHECK(code_of("[problem]\nid = p2\n[fsc]\ndt = fast\n") == ErrorCode::ConfigError);
  CHECK(code_of("[problem]\nid = p2\n[quadrature]\nrule = simpson(n=3)\n") == ErrorCode::ConfigError);
  CHECK(code_of("[problem]\nid = p4\n[oracle]\nkind = closed_form\n") == ErrorCode::ConfigError);
  CHECK(code_of("[problem]\nid = highdim\n[quadrature]\nrule = gauss()\n") == ErrorCode::DimensionTooLarge);
  CHECK(is_config_error(ErrorCode::DimensionTooLarge));
  CHECK(!is_config_error(ErrorCode::NonfiniteState));
}

TEST_CASE("quadrature spelling") {
  auto g = parse_quadrature("gauss(points_per_dim=[100,80])");
  CHECK(g.points_per_dim == std::vector<int>{100, 80});
  auto m = parse_quadrature("mc(q=100000, seed=3)");
  CHECK(m.kind == QuadratureSpec::Kind::MonteCarlo);
  CHECK(m.q == 100000);
  CHECK(m.seed == 3);
  CHECK(describe(m) == "mc(q=100000, seed=3)");
  CHECK(parse_quadrature(describe(g)).points_per_dim == g.points_per_dim);
}

TEST_CASE("seed and scale flags") {
  RunConfig c = parse_config("[problem]\nid = p6\n");
  apply_seed(c, 11);
  CHECK(c.quadrature.seed == 11);
  CHECK(c.oracle.seed == 12);
  apply_full_scale(c);
  CHECK(c.fsc.T == 150);
  CHECK(c.oracle.realizations == 1000000);
}

TEST_CASE("svg output is self-contained") {
  PlotSpec p{"t<1", "x", "y", true, {{"a", {1, 2, 3}, {1e-3, 0, 1e-1}}}};
  std::string svg = render_svg(p);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("t&lt;1") != std::string::npos);
  CHECK(svg.find("http://www.w3.org/2000/svg") != std::string::npos);
  CHECK(svg.find("<script") == std::string::npos);
}
