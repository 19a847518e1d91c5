#include "hullfw/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hullfw/instance_io.hpp"
#include "json.hpp"

namespace hullfw {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double v)
{
  if (std::isnan(v)) { return "nan"; }
  if (std::isinf(v)) { return v > 0 ? "inf" : "-inf"; }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& what)
{
  if (s == "inf") { return kInf; }
  if (s == "-inf") { return -kInf; }
  if (s == "nan") { return std::numeric_limits<double>::quiet_NaN(); }
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) { throw std::invalid_argument(what + ": bad number '" + s + "'"); }
  return v;
}

template <class T>
T parse_unsigned(const std::string& s, const std::string& what)
{
  T v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(what + ": bad integer '" + s + "'");
  }
  return v;
}

std::string quote(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) { return s; }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') { out += '"'; }
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no)
{
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) { throw std::invalid_argument("csv line " + std::to_string(line_no) + ": unterminated quote"); }
  fields.push_back(std::move(cur));
  return fields;
}

std::string read_file(const fs::path& path)
{
  std::ifstream in(path);
  if (!in) { throw std::runtime_error("cannot read " + path.string()); }
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Writes next to the target and renames, so readers never see partial files.
void write_atomically(const fs::path& path, const std::string& text)
{
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp);
    if (!out) { throw std::runtime_error("cannot write " + tmp.string()); }
    out << text;
  }
  fs::rename(tmp, path);
}

std::string sanitize(const std::string& s)
{
  std::string out;
  for (char c : s) { out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_'; }
  return out;
}

[[noreturn]] void spec_error(const std::string& field, const std::string& what)
{
  throw std::invalid_argument("grid spec field '" + field + "': " + what);
}

BranchingRule branching_from_string(const std::string& s)
{
  if (s == "most_fractional") { return BranchingRule::MostFractional; }
  if (s == "partial_strong") { return BranchingRule::PartialStrong; }
  if (s == "hybrid") { return BranchingRule::Hybrid; }
  throw std::invalid_argument("unknown branching rule '" + s + "'");
}

double number_field(const json& j, const std::string& key)
{
  if (!j.is_number()) { throw std::invalid_argument("config key '" + key + "' expects a number"); }
  return j.get<double>();
}

std::size_t count_field(const json& j, const std::string& key)
{
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw std::invalid_argument("config key '" + key + "' expects a nonnegative integer");
  }
  return j.get<std::size_t>();
}

bool bool_field(const json& j, const std::string& key)
{
  if (!j.is_boolean()) { throw std::invalid_argument("config key '" + key + "' expects true or false"); }
  return j.get<bool>();
}

json parse_object(const std::string& text, const std::string& what)
{
  json j;
  try {
    j = json::parse(text.empty() ? "{}" : text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(what + ": " + e.what());
  }
  if (!j.is_object()) { throw std::invalid_argument(what + ": expected a JSON object"); }
  return j;
}

}  // namespace

double relative_gap(double primal, double dual)
{
  if (!std::isfinite(primal)) { return kInf; }
  return (primal - dual) / std::max(std::abs(primal), 1e-8);
}

std::string emit_csv(const std::vector<ResultRow>& rows)
{
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += quote(r.instance) + "," + quote(r.solver) + "," + std::to_string(r.seed) + "," + quote(r.status) + "," +
           format_double(r.primal) + "," + format_double(r.dual) + "," + format_double(r.rel_gap) + "," +
           std::to_string(r.nodes) + "," + std::to_string(r.lmo_calls) + "," + format_double(r.wall_seconds) + "\n";
  }
  return out;
}

std::vector<ResultRow> parse_csv(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("csv: expected header '" + std::string(kCsvHeader) + "'");
  }
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) { continue; }
    const auto f = split_csv_line(line, line_no);
    const std::string where = "csv line " + std::to_string(line_no);
    if (f.size() != 10) { throw std::invalid_argument(where + ": expected 10 fields, got " + std::to_string(f.size())); }
    ResultRow r;
    r.instance = f[0];
    r.solver = f[1];
    r.seed = parse_unsigned<std::uint64_t>(f[2], where);
    r.status = f[3];
    r.primal = parse_double(f[4], where);
    r.dual = parse_double(f[5], where);
    r.rel_gap = parse_double(f[6], where);
    r.nodes = parse_unsigned<std::size_t>(f[7], where);
    r.lmo_calls = parse_unsigned<std::size_t>(f[8], where);
    r.wall_seconds = parse_double(f[9], where);
    rows.push_back(std::move(r));
  }
  return rows;
}

double shifted_geomean(const std::vector<double>& values, double shift)
{
  if (values.empty()) { throw std::invalid_argument("shifted_geomean: empty list"); }
  if (!(shift >= 0.0)) { throw std::invalid_argument("shifted_geomean: shift must be nonnegative"); }
  double sum = 0.0;
  for (double v : values) {
    if (!(v + shift > 0.0)) { throw std::invalid_argument("shifted_geomean: values must stay positive after the shift"); }
    sum += std::log(v + shift);
  }
  return std::exp(sum / static_cast<double>(values.size())) - shift;
}

SolverSpec solver_spec_from_json(const std::string& name, const std::string& config_json, const std::string& label)
{
  if (name != "hullfw" && name != "oa" && name != "nlp-bnb") {
    throw std::invalid_argument("unknown solver '" + name + "' (expected hullfw, oa or nlp-bnb)");
  }
  const json cfg = parse_object(config_json, "solver config");
  SolverSpec s;
  s.name = name;
  s.label = label.empty() ? name : label;
  const bool tree = name == "hullfw";
  SolverConfig& c = s.tree;
  for (const auto& [key, v] : cfg.items()) {
    if (key == "node_limit") {
      s.node_limit = count_field(v, key);
      c.node_limit = s.node_limit;
    } else if (!tree && key == "tolerance") {
      s.tolerance = number_field(v, key);
    } else if (!tree && key == "max_rounds") {
      s.max_rounds = count_field(v, key);
    } else if (tree && key == "abs_gap") {
      c.abs_gap = number_field(v, key);
    } else if (tree && key == "rel_gap") {
      c.rel_gap = number_field(v, key);
    } else if (tree && key == "eps0") {
      c.eps0 = number_field(v, key);
    } else if (tree && key == "rho") {
      c.rho = number_field(v, key);
    } else if (tree && key == "eps_min") {
      c.eps_min = number_field(v, key);
    } else if (tree && key == "branching") {
      if (!v.is_string()) { throw std::invalid_argument("config key 'branching' expects a string"); }
      c.branching.rule = branching_from_string(v.get<std::string>());
    } else if (tree && key == "strong_iterations") {
      c.branching.strong_iterations = count_field(v, key);
    } else if (tree && key == "strong_eps") {
      c.branching.strong_eps = number_field(v, key);
    } else if (tree && key == "hybrid_divisor") {
      c.branching.hybrid_divisor = number_field(v, key);
    } else if (tree && key == "laziness") {
      c.laziness = number_field(v, key);
    } else if (tree && key == "tree_state_threshold") {
      c.tree_state_threshold = count_field(v, key);
    } else if (tree && key == "use_local_tightening") {
      c.use_local_tightening = bool_field(v, key);
    } else if (tree && key == "use_global_tightening") {
      c.use_global_tightening = bool_field(v, key);
    } else if (tree && key == "use_strong_convexity") {
      c.use_strong_convexity = bool_field(v, key);
    } else if (tree && key == "use_sharpness") {
      c.use_sharpness = bool_field(v, key);
    } else if (tree && key == "use_shadow_set") {
      c.use_shadow_set = bool_field(v, key);
    } else if (tree && key == "use_warm_start") {
      c.use_warm_start = bool_field(v, key);
    } else if (tree && key == "certify") {
      c.certify = bool_field(v, key);
    } else if (tree && key == "max_bpcg_iterations") {
      c.max_bpcg_iterations = count_field(v, key);
    } else {
      throw std::invalid_argument("config key '" + key + "' is not a " + name + " setting");
    }
  }
  if (tree) { c.validate(); }
  if (!tree && !(s.tolerance > 0.0)) { throw std::invalid_argument("config key 'tolerance' must be positive"); }
  if (!tree && s.max_rounds == 0) { throw std::invalid_argument("config key 'max_rounds' must be positive"); }
  s.canonical = json{{"solver", name}, {"config", cfg}}.dump();
  return s;
}

SolveOutcome run_solver(const ProblemInstance& instance, const SolverSpec& spec, double time_limit)
{
  SolveOutcome out;
  if (spec.name == "hullfw") {
    SolverConfig c = spec.tree;
    c.time_limit = time_limit;
    out = solve(instance, c);
  } else if (spec.name == "oa") {
    out = solve_oa(instance, spec.tolerance, spec.max_rounds, {time_limit, spec.node_limit});
  } else if (spec.name == "nlp-bnb") {
    out = solve_nlp_bnb(instance, spec.tolerance, {time_limit, spec.node_limit});
  } else {
    throw std::invalid_argument("unknown solver '" + spec.name + "'");
  }
  out.log.header.solver = spec.label;
  return out;
}

ResultRow result_row(const RunLog& log)
{
  const RunSummary& s = log.summary;
  return {log.header.instance, log.header.solver, log.header.seed, s.status, s.primal, s.dual,
          relative_gap(s.primal, s.dual), s.nodes, s.lmo_calls, s.wall_seconds};
}

ProblemInstance make_family_instance(const std::string& family, std::size_t size, std::uint64_t seed,
                                     const std::string& params_json)
{
  const json p = parse_object(params_json, "instance params");
  std::set<std::string> allowed;
  auto num = [&](const char* key, double fallback) {
    allowed.insert(key);
    return p.contains(key) ? number_field(p[key], key) : fallback;
  };
  auto cnt = [&](const char* key, std::size_t fallback) {
    allowed.insert(key);
    return p.contains(key) ? count_field(p[key], key) : fallback;
  };
  ProblemInstance inst;
  if (family == "portfolio") {
    PortfolioOptions o;
    const double frac = num("integer_fraction", 0.5);
    o.upper = num("upper", o.upper);
    o.budget_fraction = num("budget_fraction", o.budget_fraction);
    o.diagonal = num("diagonal", o.diagonal);
    o.return_scale = num("return_scale", o.return_scale);
    inst = make_portfolio(size, frac, seed, o);
  } else if (family == "sparse_reg" || family == "poisson" || family == "logistic") {
    RegressionOptions o;
    const std::size_t m = cnt("samples", 3 * size);
    const std::size_t k = cnt("sparsity", std::max<std::size_t>(1, size / 3));
    o.ridge = num("ridge", o.ridge);
    o.noise = num("noise", o.noise);
    if (family == "sparse_reg") {
      inst = make_sparse_regression(m, size, k, seed, o);
    } else if (family == "poisson") {
      inst = make_poisson_regression(m, size, k, seed, o);
    } else {
      inst = make_logistic_regression(m, size, k, seed, o);
    }
  } else if (family == "tcmp") {
    const double lambda = num("lambda", 0.1);
    const double mu_r = num("mu_r", 1e-3);
    allowed.insert("tau");
    Vector tau(size, 0.1);
    if (p.contains("tau")) {
      if (p["tau"].is_array()) {
        tau.clear();
        for (const auto& t : p["tau"]) { tau.push_back(number_field(t, "tau")); }
      } else {
        std::fill(tau.begin(), tau.end(), number_field(p["tau"], "tau"));
      }
    }
    inst = make_tcmp(size, lambda, mu_r, tau, seed);
  } else {
    throw std::invalid_argument("unknown instance family '" + family + "'");
  }
  for (const auto& [key, v] : p.items()) {
    if (!allowed.count(key)) { throw std::invalid_argument("instance param '" + key + "' is not used by " + family); }
  }
  if (!p.empty()) { inst.name += "_" + config_hash(p.dump()).substr(0, 6); }
  return inst;
}

std::string config_hash(const std::string& canonical)
{
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::vector<GridCell> parse_grid_spec(const std::string& text, const fs::path& base_dir)
{
  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "at line L, column C"
    throw std::invalid_argument(std::string("grid spec: ") + e.what());
  }
  if (!spec.is_object()) { spec_error("<root>", "expected a JSON object"); }
  for (const auto& [key, v] : spec.items()) {
    if (key != "time_limit" && key != "instances" && key != "solvers") { spec_error(key, "unknown field"); }
  }
  double time_limit = 60.0;
  if (spec.contains("time_limit")) {
    if (!spec["time_limit"].is_number() || !(spec["time_limit"].get<double>() > 0.0)) {
      spec_error("time_limit", "expected a positive number");
    }
    time_limit = spec["time_limit"].get<double>();
  }
  if (!spec.contains("instances") || !spec["instances"].is_array()) { spec_error("instances", "expected an array"); }
  if (!spec.contains("solvers") || !spec["solvers"].is_array()) { spec_error("solvers", "expected an array"); }

  std::vector<SolverSpec> solvers;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < spec["solvers"].size(); ++i) {
    const json& s = spec["solvers"][i];
    const std::string where = "solvers[" + std::to_string(i) + "]";
    if (!s.is_object()) { spec_error(where, "expected an object"); }
    for (const auto& [key, v] : s.items()) {
      if (key != "name" && key != "label" && key != "config") { spec_error(where + "." + key, "unknown field"); }
    }
    if (!s.contains("name") || !s["name"].is_string()) { spec_error(where + ".name", "expected a string"); }
    std::string label;
    if (s.contains("label")) {
      if (!s["label"].is_string()) { spec_error(where + ".label", "expected a string"); }
      label = s["label"].get<std::string>();
    }
    const std::string config = s.contains("config") ? s["config"].dump() : "{}";
    try {
      solvers.push_back(solver_spec_from_json(s["name"].get<std::string>(), config, label));
    } catch (const std::invalid_argument& e) {
      spec_error(where, e.what());
    }
    if (!labels.insert(solvers.back().label).second) { spec_error(where + ".label", "duplicate label"); }
  }

  std::vector<GridCell> cells;
  for (std::size_t i = 0; i < spec["instances"].size(); ++i) {
    const json& e = spec["instances"][i];
    const std::string where = "instances[" + std::to_string(i) + "]";
    if (!e.is_object()) { spec_error(where, "expected an object"); }
    std::vector<GridCell> base;
    if (e.contains("file")) {
      for (const auto& [key, v] : e.items()) {
        if (key != "file") { spec_error(where + "." + key, "unknown field next to 'file'"); }
      }
      if (!e["file"].is_string()) { spec_error(where + ".file", "expected a string"); }
      GridCell c;
      c.file = base_dir / e["file"].get<std::string>();
      std::string content;
      try {
        content = read_file(c.file);
      } catch (const std::exception& ex) {
        spec_error(where + ".file", ex.what());
      }
      c.instance_key = json{{"file", c.file.filename().string()}, {"content", config_hash(content)}}.dump();
      base.push_back(std::move(c));
    } else {
      for (const auto& [key, v] : e.items()) {
        if (key != "family" && key != "sizes" && key != "seeds" && key != "params") {
          spec_error(where + "." + key, "unknown field");
        }
      }
      if (!e.contains("family") || !e["family"].is_string()) { spec_error(where + ".family", "expected a string"); }
      const std::string params = e.contains("params") ? e["params"].dump() : "{}";
      if (e.contains("params") && !e["params"].is_object()) { spec_error(where + ".params", "expected an object"); }
      for (const char* key : {"sizes", "seeds"}) {
        if (!e.contains(key) || !e[key].is_array()) { spec_error(where + "." + key, "expected an array"); }
        for (const auto& v : e[key]) {
          if (!v.is_number_unsigned()) { spec_error(where + "." + key, "expected nonnegative integers"); }
        }
      }
      for (const auto& size : e["sizes"]) {
        for (const auto& seed : e["seeds"]) {
          GridCell c;
          c.family = e["family"].get<std::string>();
          c.size = size.get<std::size_t>();
          c.seed = seed.get<std::uint64_t>();
          c.params = params;
          try {
            (void)make_family_instance(c.family, c.size, c.seed, c.params);
          } catch (const std::invalid_argument& ex) {
            spec_error(where, ex.what());
          }
          c.instance_key =
              json{{"family", c.family}, {"size", c.size}, {"seed", c.seed}, {"params", json::parse(params)}}.dump();
          base.push_back(std::move(c));
        }
      }
    }
    for (const auto& b : base) {
      for (const auto& s : solvers) {
        GridCell c = b;
        c.solver = s;
        c.time_limit = time_limit;
        c.hash = config_hash(json{{"instance", json::parse(c.instance_key)},
                                  {"solver", json::parse(s.canonical)},
                                  {"label", s.label},
                                  {"time_limit", time_limit}}
                                 .dump());
        cells.push_back(std::move(c));
      }
    }
  }
  return cells;
}

GridReport run_grid(const fs::path& spec_file, const fs::path& out_dir, std::size_t jobs)
{
  const std::vector<GridCell> cells = parse_grid_spec(read_file(spec_file), spec_file.parent_path());
  fs::create_directories(out_dir);
  const double time_limit = cells.empty() ? 60.0 : cells.front().time_limit;
  write_atomically(out_dir / "manifest.json", json{{"time_limit", time_limit}, {"cells", cells.size()}}.dump(1));

  auto log_path = [&](const GridCell& c) {
    const std::string stem = c.file.empty() ? c.family + "_" + std::to_string(c.size) + "_" + std::to_string(c.seed)
                                            : c.file.stem().string();
    return out_dir / (sanitize(stem) + "__" + sanitize(c.solver.label) + "__" + c.hash + ".json");
  };

  GridReport report;
  report.cells = cells.size();
  std::atomic<std::size_t> next{0}, computed{0}, skipped{0}, failed{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const GridCell& c = cells[i];
      const fs::path path = log_path(c);
      if (fs::exists(path)) {
        ++skipped;
        continue;
      }
      RunLog log;
      std::uint64_t seed = c.seed;
      std::string name;
      try {
        const ProblemInstance inst =
            c.file.empty() ? make_family_instance(c.family, c.size, c.seed, c.params) : load_instance(c.file);
        name = inst.name.empty() ? c.file.stem().string() : inst.name;
        SolveOutcome out = run_solver(inst, c.solver, c.time_limit);
        log = std::move(out.log);
      } catch (const std::exception& e) {
        ++failed;
        log = RunLog();
        log.add("error", {});
        log.summary = {"error", kInf, -kInf, 0, 0, log.elapsed()};
        if (name.empty()) { name = c.file.empty() ? c.family + "_" + std::to_string(c.size) : c.file.stem().string(); }
      }
      log.header = {name, c.solver.label, c.hash, seed};
      write_atomically(path, log.to_json());
      ++computed;
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) { pool.emplace_back(worker); }
  worker();
  for (auto& t : pool) { t.join(); }

  std::vector<ResultRow> rows;
  for (const auto& c : cells) { rows.push_back(result_row(RunLog::from_json(read_file(log_path(c))))); }
  write_atomically(out_dir / "results.csv", emit_csv(rows));
  report.computed = computed;
  report.skipped = skipped;
  report.failed = failed;
  return report;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, const std::vector<double>& thresholds,
                                  double time_limit)
{
  using Key = std::pair<std::string, std::uint64_t>;
  auto solved = [](const ResultRow& r) { return r.status == to_string(SolveStatus::Optimal); };
  auto time_of = [&](const ResultRow& r) {
    if (solved(r)) { return r.wall_seconds; }
    return std::isfinite(time_limit) ? time_limit : r.wall_seconds;
  };
  std::map<Key, double> min_time;
  std::map<Key, double> ref_dual;
  std::vector<std::string> solvers;
  for (const auto& r : rows) {
    const Key k{r.instance, r.seed};
    auto [it, fresh] = min_time.emplace(k, time_of(r));
    if (!fresh) { it->second = std::min(it->second, time_of(r)); }
    auto [dt, dfresh] = ref_dual.emplace(k, r.dual);
    if (!dfresh && r.dual > dt->second) { dt->second = r.dual; }
    if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) { solvers.push_back(r.solver); }
  }

  std::vector<SummaryRow> table;
  for (double t : thresholds) {
    for (const auto& s : solvers) {
      SummaryRow row;
      row.solver = s;
      row.threshold = t;
      std::vector<double> times;
      double gap_sum = 0.0;
      for (const auto& r : rows) {
        const Key k{r.instance, r.seed};
        if (r.solver != s || !(min_time.at(k) >= t)) { continue; }
        ++row.instances;
        if (solved(r)) { ++row.solved; }
        times.push_back(time_of(r));
        gap_sum += std::isfinite(r.primal) ? std::max(0.0, relative_gap(r.primal, ref_dual.at(k))) : kInf;
      }
      if (row.instances > 0) {
        const double count = static_cast<double>(row.instances);
        row.percent_solved = 100.0 * static_cast<double>(row.solved) / count;
        row.geomean_time = shifted_geomean(times, 1.0);
        row.mean_rel_gap = gap_sum / count;
      }
      table.push_back(row);
    }
  }
  return table;
}

std::vector<SummaryRow> summarize(const fs::path& results_dir, const std::vector<double>& thresholds)
{
  double time_limit = kInf;
  if (fs::exists(results_dir / "manifest.json")) {
    const json m = json::parse(read_file(results_dir / "manifest.json"));
    if (m.contains("time_limit")) { time_limit = m["time_limit"].get<double>(); }
  }
  return summarize(parse_csv(read_file(results_dir / "results.csv")), thresholds, time_limit);
}

std::string format_summary(const std::vector<SummaryRow>& table)
{
  std::ostringstream out;
  out << std::left << std::setw(16) << "solver" << std::right << std::setw(10) << "bucket" << std::setw(10)
      << "instances" << std::setw(8) << "solved" << std::setw(9) << "%solved" << std::setw(12) << "time(sgm)"
      << std::setw(12) << "rel_gap" << '\n';
  for (const auto& r : table) {
    out << std::left << std::setw(16) << r.solver << std::right << std::setw(10) << r.threshold << std::setw(10)
        << r.instances << std::setw(8) << r.solved << std::setw(9) << std::fixed << std::setprecision(1)
        << r.percent_solved << std::setw(12) << std::setprecision(3) << r.geomean_time << std::setw(12)
        << std::scientific << std::setprecision(2) << r.mean_rel_gap << std::defaultfloat << '\n';
  }
  return out.str();
}

}  // namespace hullfw
