#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "hullfw/baselines.hpp"
#include "hullfw/instance.hpp"
#include "hullfw/tree.hpp"

namespace hullfw {

/// One line of the results CSV.
struct ResultRow
{
  std::string instance;
  std::string solver;
  std::uint64_t seed = 0;
  std::string status;
  double primal = std::numeric_limits<double>::infinity();
  double dual = -std::numeric_limits<double>::infinity();
  double rel_gap = std::numeric_limits<double>::infinity();
  std::size_t nodes = 0;
  std::size_t lmo_calls = 0;
  double wall_seconds = 0.0;

  bool operator==(const ResultRow&) const = default;
};

inline constexpr const char* kCsvHeader =
    "instance,solver,seed,status,primal,dual,rel_gap,nodes,lmo_calls,wall_seconds";

/// (primal - dual) / max(|primal|, 1e-8); infinity without a finite primal.
double relative_gap(double primal, double dual);

/// Numbers are written with round-trip precision, infinities as inf/-inf.
std::string emit_csv(const std::vector<ResultRow>& rows);
/// Throws std::invalid_argument on a bad header or malformed line.
std::vector<ResultRow> parse_csv(const std::string& text);

/// exp(mean(log(v + shift))) - shift. Throws std::invalid_argument on an
/// empty list, a negative shift or a value with v + shift <= 0.
double shifted_geomean(const std::vector<double>& values, double shift);

/// Which solver runs a cell and with what settings. `label` names the cell in
/// the results (defaults to the solver name) so ablations can sit side by side.
struct SolverSpec
{
  /// hullfw, oa or nlp-bnb
  std::string name = "hullfw";
  std::string label = "hullfw";
  SolverConfig tree;
  double tolerance = 1e-6;
  std::size_t max_rounds = 200;
  std::size_t node_limit = std::numeric_limits<std::size_t>::max();
  /// canonical JSON of the settings, the input to config hashes
  std::string canonical;
};

/// Settings object: tree keys (abs_gap, rel_gap, eps0, rho, eps_min,
/// branching, strong_iterations, strong_eps, hybrid_divisor, laziness,
/// tree_state_threshold, use_local_tightening, use_global_tightening,
/// use_strong_convexity, use_sharpness, use_shadow_set, use_warm_start,
/// certify, node_limit, max_bpcg_iterations) for hullfw; tolerance,
/// max_rounds and node_limit for the baselines. Unknown keys are rejected.
SolverSpec solver_spec_from_json(const std::string& name, const std::string& config_json, const std::string& label = "");

SolveOutcome run_solver(const ProblemInstance& instance, const SolverSpec& spec, double time_limit);

ResultRow result_row(const RunLog& log);

/// Generated instance by family name: portfolio (size = n; integer_fraction),
/// sparse_reg, poisson and logistic (size = features; samples, sparsity),
/// tcmp (size = n; lambda, mu_r, tau). `params_json` is an object.
ProblemInstance make_family_instance(const std::string& family, std::size_t size, std::uint64_t seed,
                                     const std::string& params_json = "{}");

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string config_hash(const std::string& canonical);

struct GridCell
{
  std::string instance_key;
  std::string family;
  std::size_t size = 0;
  std::uint64_t seed = 0;
  std::string params;
  std::filesystem::path file;
  SolverSpec solver;
  double time_limit = 60.0;
  std::string hash;
};

/// Grid spec:
///   {"time_limit": s,
///    "instances": [{"family", "sizes": [...], "seeds": [...], "params": {...}} | {"file": path}],
///    "solvers": [{"name": hullfw|oa|nlp-bnb, "label"?, "config"?: {...}}]}
/// Throws std::invalid_argument naming the line or field at fault.
std::vector<GridCell> parse_grid_spec(const std::string& text, const std::filesystem::path& base_dir = {});

struct GridReport
{
  std::size_t cells = 0;
  std::size_t computed = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
};

/// Runs every cell not already present in `out_dir` (matched by config
/// hash), one RunLog JSON per cell, then rewrites out_dir/results.csv from
/// the logs of this grid. Failed runs are logged with status "error".
GridReport run_grid(const std::filesystem::path& spec_file, const std::filesystem::path& out_dir, std::size_t jobs = 1);

/// Per solver and bucket threshold. An instance belongs to the bucket of
/// threshold t when its minimum time across solvers is at least t; unsolved
/// runs count with time = time_limit. Times are averaged by shifted_geomean
/// with shift 1. Relative gaps are measured against the best dual bound any
/// solver reported for the instance.
struct SummaryRow
{
  std::string solver;
  double threshold = 0.0;
  std::size_t instances = 0;
  std::size_t solved = 0;
  double percent_solved = 0.0;
  double geomean_time = 0.0;
  double mean_rel_gap = 0.0;

  bool operator==(const SummaryRow&) const = default;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, const std::vector<double>& thresholds,
                                  double time_limit);
/// Reads out_dir/results.csv and the time limit recorded by run_grid.
std::vector<SummaryRow> summarize(const std::filesystem::path& results_dir, const std::vector<double>& thresholds);

std::string format_summary(const std::vector<SummaryRow>& table);

}  // namespace hullfw
