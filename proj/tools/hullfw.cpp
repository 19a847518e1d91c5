// Command line front end: solve one instance, run a benchmark grid, summarize
// a results directory, or write a generated instance.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hullfw/harness.hpp"
#include "hullfw/instance_io.hpp"

namespace {

std::string read_text(const std::string& path)
{
  std::ifstream in(path);
  if (!in) { throw std::runtime_error("cannot read " + path); }
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Mixed-integer convex solver over integer hulls"};
  app.require_subcommand(1);

  std::string instance_path, config_path, solver = "hullfw", log_path;
  double time_limit = std::numeric_limits<double>::infinity();
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance file");
  solve_cmd->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--config", config_path, "Solver settings JSON")->check(CLI::ExistingFile);
  solve_cmd->add_option("--solver", solver, "hullfw, oa or nlp-bnb")
      ->check(CLI::IsMember({"hullfw", "oa", "nlp-bnb"}));
  solve_cmd->add_option("--time-limit", time_limit, "Wall-clock limit in seconds")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--log", log_path, "Write the run log JSON here");

  std::string spec_path, out_dir;
  std::size_t jobs = 1;
  auto* grid_cmd = app.add_subcommand("grid", "Run a benchmark grid");
  grid_cmd->add_option("spec", spec_path, "Grid spec JSON")->required()->check(CLI::ExistingFile);
  grid_cmd->add_option("--out", out_dir, "Results directory")->required();
  grid_cmd->add_option("--jobs", jobs, "Concurrent solves")->check(CLI::PositiveNumber);

  std::string report_dir;
  std::vector<double> buckets = {0, 10, 300, 600, 1200};
  auto* report_cmd = app.add_subcommand("report", "Summarize a results directory");
  report_cmd->add_option("dir", report_dir, "Results directory")->required()->check(CLI::ExistingDirectory);
  report_cmd->add_option("--buckets", buckets, "Minimum-time thresholds in seconds")->delimiter(',');

  std::string family, params = "{}", gen_out;
  std::size_t size = 10;
  std::uint64_t seed = 0;
  auto* gen_cmd = app.add_subcommand("generate", "Write a generated instance");
  gen_cmd->add_option("family", family, "portfolio, sparse_reg, poisson, logistic or tcmp")->required();
  gen_cmd->add_option("--size", size, "Variables (portfolio, tcmp) or features (regressions)");
  gen_cmd->add_option("--seed", seed, "Generator seed");
  gen_cmd->add_option("--params", params, "Family parameters as a JSON object");
  gen_cmd->add_option("--out", gen_out, "Output file (stdout when absent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      const hullfw::ProblemInstance inst = hullfw::load_instance(instance_path);
      const hullfw::SolverSpec spec =
          hullfw::solver_spec_from_json(solver, config_path.empty() ? "{}" : read_text(config_path));
      hullfw::SolveOutcome out = hullfw::run_solver(inst, spec, time_limit);
      out.log.header.instance = inst.name;
      std::printf("instance   %s\nsolver     %s\nstatus     %s\nprimal     %.12g\ndual       %.12g\n"
                  "rel_gap    %.3e\nnodes      %zu\nlmo_calls  %zu\nseconds    %.3f\n",
                  inst.name.c_str(), spec.label.c_str(), hullfw::to_string(out.status), out.primal, out.dual,
                  hullfw::relative_gap(out.primal, out.dual), out.nodes_processed, out.total_lmo_calls,
                  out.log.summary.wall_seconds);
      if (!log_path.empty()) {
        std::ofstream f(log_path);
        if (!f) { throw std::runtime_error("cannot write " + log_path); }
        f << out.log.to_json() << '\n';
      }
    } else if (*grid_cmd) {
      const hullfw::GridReport r = hullfw::run_grid(spec_path, out_dir, jobs);
      std::printf("cells %zu computed %zu skipped %zu failed %zu\nresults %s/results.csv\n", r.cells, r.computed,
                  r.skipped, r.failed, out_dir.c_str());
    } else if (*report_cmd) {
      std::cout << hullfw::format_summary(hullfw::summarize(std::filesystem::path(report_dir), buckets));
    } else if (*gen_cmd) {
      const hullfw::ProblemInstance inst = hullfw::make_family_instance(family, size, seed, params);
      if (gen_out.empty()) {
        std::cout << hullfw::instance_to_json(inst) << '\n';
      } else {
        hullfw::save_instance(gen_out, inst);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
