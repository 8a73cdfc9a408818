#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsc/fsc.hpp"
#include "fsc/oracle.hpp"
#include "fsc/problems.hpp"

namespace fsc {

struct QuadratureSpec {
  enum class Kind { Gauss, MonteCarlo };
  Kind kind = Kind::Gauss;
  std::vector<int> points_per_dim;  // empty: per-law defaults
  std::size_t q = 100000;
  std::uint64_t seed = 3;
};

// "gauss(points_per_dim=[100,80])", "gauss()", "mc(q=100000, seed=3)".
QuadratureSpec parse_quadrature(const std::string& text);
std::string describe(const QuadratureSpec& spec);

struct OracleSpec {
  std::string kind = "auto";  // auto | closed_form | dense | mc | none
  std::size_t realizations = 100000;
  std::uint64_t seed = 7;
  int dense_points = 400;
};

struct RunConfig {
  std::string problem = "p2";
  std::string variant;
  int d = 10;
  FscConfig fsc;
  QuadratureSpec quadrature;
  OracleSpec oracle;
  std::string out_dir = "out";
  bool plots = true;
};

// Sectioned key = value text ([problem], [fsc], [quadrature], [oracle], [output]);
// '#' and ';' start comments. Problem defaults fill every key that is not given.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string dump_config(const RunConfig& cfg);

// Long-horizon settings: T = 150 s and 10^6 reference realizations.
void apply_full_scale(RunConfig& cfg);
void apply_seed(RunConfig& cfg, std::uint64_t seed);

NodeSetPtr make_nodes(const QuadratureSpec& spec, const ProblemSpec& problem);
ProblemSpec problem_for(const RunConfig& cfg);

}  // namespace fsc
