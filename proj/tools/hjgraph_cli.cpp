// Command-line front end: solve, convergence, oracle-compare, boundary-demo.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hjgraph/config.hpp"
#include "hjgraph/error.hpp"
#include "hjgraph/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out;
  std::vector<int> resolutions;
  std::vector<double> snapshot_times;
  bool strict_cfl = false;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "experiment config file (key = value)")->required();
  cmd->add_option("--out", opt.out, "output directory");
  cmd->add_flag("--strict-cfl", opt.strict_cfl, "refuse explicit runs above the estimated CFL ratio");
}

hjg::ExperimentConfig load(const Options& opt) {
  auto cfg = hjg::ExperimentConfig::load(opt.config);
  if (!opt.resolutions.empty()) cfg.resolutions = opt.resolutions;
  if (!opt.snapshot_times.empty()) cfg.snapshot_times = opt.snapshot_times;
  if (opt.strict_cfl) cfg.strict_cfl = true;
  cfg.validate();
  return cfg;
}

void print_report(const hjg::ErrorReport& report) { std::cout << report.to_csv(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamilton-Jacobi solver on the Wasserstein space over graphs"};
  app.require_subcommand(1);
  Options opt;

  auto* solve = app.add_subcommand("solve", "run one configuration and write snapshots");
  add_common(solve, opt);
  solve->add_option("--snapshot-times", opt.snapshot_times, "times in [0, T] to record")->delimiter(',');

  auto* conv = app.add_subcommand("convergence", "error table against a refined reference run");
  add_common(conv, opt);
  conv->add_option("--resolutions", opt.resolutions, "mesh levels N, increasing")->delimiter(',');

  auto* oracle = app.add_subcommand("oracle-compare", "error table against the exact pure-noise solution");
  add_common(oracle, opt);
  oracle->add_option("--resolutions", opt.resolutions, "mesh levels N, increasing")->delimiter(',');

  auto* demo = app.add_subcommand("boundary-demo", "Dirichlet versus extrapolation near the boundary");
  add_common(demo, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    const auto cfg = load(opt);
    if (solve->parsed()) {
      const auto manifest = hjg::cmd_solve(cfg, opt.out);
      std::cout << "steps " << manifest["effective"]["steps"] << ", final sup norm "
                << manifest["max_norm"].back() << ", bound excess " << manifest["worst_bound_excess"] << "\n";
    } else if (conv->parsed()) {
      print_report(hjg::cmd_convergence(cfg, opt.out));
    } else if (oracle->parsed()) {
      print_report(hjg::cmd_oracle_compare(cfg, opt.out));
    } else if (demo->parsed()) {
      std::cout << hjg::cmd_boundary_demo(cfg, opt.out).to_json().dump(2) << "\n";
    }
  } catch (const hjg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hjg::is_numerical_failure(e.code()) ? kExitNumerical : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
