// Batch driver: run one configuration or sweep one setting, writing CSV, JSON and SVG.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>

#include "fsc/error.hpp"
#include "fsc/pipeline.hpp"

using namespace fsc;

namespace {

const char* module_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidParameters:
    case ErrorCode::UnknownVariant: return "problems";
    case ErrorCode::DimensionTooLarge:
    case ErrorCode::NodeSetMismatch: return "quadrature";
    case ErrorCode::DegenerateFunction:
    case ErrorCode::SingularCovariance: return "rfs";
    case ErrorCode::ChainUnavailable:
    case ErrorCode::NonfiniteDerivative: return "flowmap";
    case ErrorCode::BasisCollapse:
    case ErrorCode::NonfiniteRhs:
    case ErrorCode::NonfiniteState:
    case ErrorCode::NumericalFailure: return "fsc";
    case ErrorCode::GridMismatch:
    case ErrorCode::NonfinitePath: return "oracle";
    case ErrorCode::ConfigError: return "cli";
  }
  return "fsc";
}

int report_error(const Error& e) {
  std::cerr << "error [" << module_of(e.code()) << "]: " << e.what();
  if (e.index >= 0) std::cerr << " (time step " << e.index << ")";
  std::cerr << "\n";
  return is_config_error(e.code()) ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flow-driven spectral chaos uncertainty propagation"};
  app.require_subcommand(1);
  std::string config_path, out_dir, axis;
  std::optional<std::uint64_t> seed;
  bool print_config = false, dry_run = false, full_scale = false;
  std::vector<double> values;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "configuration file")->required();
    sub->add_flag("--print-config", print_config, "print the resolved configuration and exit");
    sub->add_flag("--dry-run", dry_run, "validate the configuration only");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for Monte Carlo nodes and references");
    sub->add_flag("--full-scale", full_scale, "T = 150 s and 10^6-realization references");
  };
  CLI::App* run = app.add_subcommand("run", "run one configuration");
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "sweep one setting and tabulate global errors");
  add_common(sweep);
  sweep->add_option("--axis", axis, "P, dt or Q")->required()->check(CLI::IsMember({"P", "dt", "Q"}));
  sweep->add_option("--values", values, "comma-separated values of the swept setting")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (full_scale) apply_full_scale(cfg);
    if (seed) apply_seed(cfg, *seed);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    validate(cfg.fsc, problem_for(cfg).ode->order());
    if (print_config) {
      std::cout << dump_config(cfg);
      return 0;
    }
    if (dry_run) {
      std::cout << "configuration ok\n";
      return 0;
    }
    if (run->parsed()) {
      RunOutput out = run_config(cfg);
      std::cout << "wrote " << cfg.out_dir << "\n";
      if (out.errors)
        std::printf("global_mean %.6e global_var %.6e (%s)\n", out.errors->global_mean, out.errors->global_var,
                    to_string(out.errors->reference));
      return 0;
    }
    auto points = sweep_config(cfg, axis, values);
    std::printf("%-12s %-14s %-14s %s\n", axis.c_str(), "global_mean", "global_var", "seconds");
    for (const auto& p : points) {
      std::printf("%-12g %-14.6e %-14.6e %.2f\n", p.value, p.global_mean, p.global_var, p.wall_seconds);
      if (!p.error.empty()) std::fprintf(stderr, "  failed: %s\n", p.error.c_str());
    }
    return 0;
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
