#include "hullfw/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hullfw {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what)
{
  throw std::invalid_argument("instance field '" + field + "': " + what);
}

json number(double v)
{
  if (std::isinf(v)) { return v > 0 ? "inf" : "-inf"; }
  if (std::isnan(v)) { fail("number", "NaN is not allowed"); }
  return v;
}

json vector_json(const Vector& v)
{
  json out = json::array();
  for (double x : v) { out.push_back(number(x)); }
  return out;
}

json matrix_json(const Matrix& m)
{
  json out = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) { out.push_back(vector_json(Vector(m.row(i).begin(), m.row(i).end()))); }
  return out;
}

const json& field(const json& parent, const std::string& key, const std::string& path)
{
  if (!parent.is_object()) { fail(path, "expected an object"); }
  auto it = parent.find(key);
  if (it == parent.end()) { fail(path.empty() ? key : path + "." + key, "missing"); }
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double read_number(const json& j, const std::string& path)
{
  if (j.is_number()) { return j.get<double>(); }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") { return std::numeric_limits<double>::infinity(); }
    if (s == "-inf") { return -std::numeric_limits<double>::infinity(); }
  }
  fail(path, "expected a number, got " + j.dump());
}

double read_number(const json& parent, const std::string& key, const std::string& path)
{
  return read_number(field(parent, key, path), join(path, key));
}

Vector read_vector(const json& parent, const std::string& key, const std::string& path)
{
  const json& j = field(parent, key, path);
  const std::string p = join(path, key);
  if (!j.is_array()) { fail(p, "expected an array"); }
  Vector out;
  for (std::size_t i = 0; i < j.size(); ++i) { out.push_back(read_number(j[i], p + "[" + std::to_string(i) + "]")); }
  return out;
}

Matrix read_matrix(const json& parent, const std::string& key, const std::string& path)
{
  const json& j = field(parent, key, path);
  const std::string p = join(path, key);
  if (!j.is_array()) { fail(p, "expected an array of rows"); }
  Matrix m;
  m.rows = j.size();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string rp = p + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) { fail(rp, "expected a row array"); }
    if (i == 0) { m.cols = j[i].size(); }
    if (j[i].size() != m.cols) { fail(rp, "row length differs from the first row"); }
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      m.data.push_back(read_number(j[i][k], rp + "[" + std::to_string(k) + "]"));
    }
  }
  return m;
}

std::size_t read_index(const json& j, const std::string& path)
{
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    fail(path, "expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::string read_string(const json& parent, const std::string& key, const std::string& path)
{
  const json& j = field(parent, key, path);
  if (!j.is_string()) { fail(join(path, key), "expected a string"); }
  return j.get<std::string>();
}

const char* sense_name(lp::Sense s)
{
  switch (s) {
    case lp::Sense::LessEqual: return "<=";
    case lp::Sense::GreaterEqual: return ">=";
    case lp::Sense::Equal: return "=";
  }
  return "?";
}

lp::Sense read_sense(const json& parent, const std::string& path)
{
  const std::string s = read_string(parent, "sense", path);
  if (s == "<=") { return lp::Sense::LessEqual; }
  if (s == ">=") { return lp::Sense::GreaterEqual; }
  if (s == "=") { return lp::Sense::Equal; }
  fail(join(path, "sense"), "expected one of <=, >=, =");
}

json row_json(const lp::Row& r)
{
  return {{"coeffs", vector_json(r.coeffs)}, {"sense", sense_name(r.sense)}, {"rhs", number(r.rhs)}};
}

lp::Row read_row(const json& j, const std::string& path)
{
  return {read_vector(j, "coeffs", path), read_sense(j, path), read_number(j, "rhs", path)};
}

bool quadratic_kind(const std::string& kind) { return kind == "portfolio" || kind == "custom_quadratic"; }
bool glm_kind(const std::string& kind)
{
  return kind == "sparse_reg" || kind == "poisson" || kind == "logistic" || kind == "tcmp";
}

}  // namespace

std::string instance_to_json(const ProblemInstance& inst)
{
  inst.validate();
  json params;
  if (const auto* q = dynamic_cast<const QuadraticObjective*>(inst.objective.get())) {
    if (!quadratic_kind(inst.family)) { fail("objective.kind", "family " + inst.family + " needs a GLM objective"); }
    params = {{"q", matrix_json(q->q())}, {"c", vector_json(q->c())}, {"constant", number(q->constant())}};
  } else if (const auto* g = dynamic_cast<const GlmObjective*>(inst.objective.get())) {
    if (!glm_kind(inst.family)) { fail("objective.kind", "family " + inst.family + " needs a quadratic objective"); }
    params = {{"loss", to_string(g->loss())},
              {"design", matrix_json(g->design())},
              {"response", vector_json(g->response())},
              {"ridge", number(g->ridge())},
              {"linear", vector_json(g->linear())}};
  } else {
    fail("objective", "only quadratic and GLM objectives can be written");
  }
  if (inst.objective->strong_convexity_mu) { params["strong_convexity_mu"] = number(*inst.objective->strong_convexity_mu); }
  if (inst.objective->sharpness) {
    params["sharpness"] = {{"theta", inst.objective->sharpness->theta}, {"M", inst.objective->sharpness->M}};
  }

  const auto& model = inst.region.model;
  json region;
  switch (inst.region.kind) {
    case RegionKind::IntegerBox: region = {{"kind", "integer_box"}}; break;
    case RegionKind::Budget:
      region = {{"kind", "budget"}, {"costs", vector_json(inst.region.costs)}, {"budget", number(inst.region.budget)}};
      break;
    case RegionKind::GenericMilp: {
      json rows = json::array();
      for (const auto& r : model.base.rows) { rows.push_back(row_json(r)); }
      json indicators = json::array();
      for (const auto& ind : model.indicators) {
        json j = row_json(ind.row);
        j["binary"] = ind.binary;
        indicators.push_back(std::move(j));
      }
      region = {{"kind", "milp"}, {"rows", rows}, {"indicators", indicators}};
      break;
    }
  }

  json out;
  out["name"] = inst.name;
  out["dimension"] = inst.dimension();
  out["objective"] = {{"kind", inst.family}, {"params", params}};
  out["region"] = region;
  out["integer_indices"] = model.integer_indices;
  out["lower"] = vector_json(model.base.lower);
  out["upper"] = vector_json(model.base.upper);
  if (inst.known_optimum) { out["known_optimum"] = number(*inst.known_optimum); }
  return out.dump(1);
}

ProblemInstance instance_from_json(const std::string& text)
{
  json in;
  try {
    in = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("instance: ") + e.what());
  }
  if (!in.is_object()) { fail("", "expected a JSON object"); }

  const json& dim_j = field(in, "dimension", "");
  const std::size_t n = read_index(dim_j, "dimension");
  const Vector lower = read_vector(in, "lower", "");
  const Vector upper = read_vector(in, "upper", "");
  if (lower.size() != n) { fail("lower", "length differs from dimension"); }
  if (upper.size() != n) { fail("upper", "length differs from dimension"); }
  std::vector<std::size_t> ints;
  {
    const json& j = field(in, "integer_indices", "");
    if (!j.is_array()) { fail("integer_indices", "expected an array"); }
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::size_t idx = read_index(j[i], "integer_indices[" + std::to_string(i) + "]");
      if (idx >= n) { fail("integer_indices[" + std::to_string(i) + "]", "index out of range"); }
      ints.push_back(idx);
    }
  }

  ProblemInstance inst;
  if (auto it = in.find("name"); it != in.end()) {
    if (!it->is_string()) { fail("name", "expected a string"); }
    inst.name = it->get<std::string>();
  }
  if (in.contains("known_optimum")) { inst.known_optimum = read_number(in, "known_optimum", ""); }

  const json& obj = field(in, "objective", "");
  inst.family = read_string(obj, "kind", "objective");
  const json& params = field(obj, "params", "objective");
  const std::string pp = "objective.params";
  std::shared_ptr<ObjectiveOracle> objective;
  try {
    if (quadratic_kind(inst.family)) {
      Matrix q = read_matrix(params, "q", pp);
      Vector c = read_vector(params, "c", pp);
      const double constant = params.contains("constant") ? read_number(params, "constant", pp) : 0.0;
      if (q.rows != n || q.cols != n) { fail(pp + ".q", "must be dimension x dimension"); }
      if (c.size() != n) { fail(pp + ".c", "length differs from dimension"); }
      objective = std::make_shared<QuadraticObjective>(std::move(q), std::move(c), constant);
    } else if (glm_kind(inst.family)) {
      const Loss loss = loss_from_string(read_string(params, "loss", pp));
      Matrix a = read_matrix(params, "design", pp);
      Vector y = read_vector(params, "response", pp);
      Vector linear = read_vector(params, "linear", pp);
      if (linear.size() != n) { fail(pp + ".linear", "length differs from dimension"); }
      if (a.cols > n) { fail(pp + ".design", "more columns than the dimension"); }
      if (y.size() != a.rows) { fail(pp + ".response", "length differs from the design rows"); }
      objective = std::make_shared<GlmObjective>(loss, std::move(a), std::move(y), read_number(params, "ridge", pp),
                                                 std::move(linear));
    } else {
      fail("objective.kind", "unknown kind '" + inst.family + "'");
    }
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    if (what.rfind("instance field", 0) == 0) { throw; }
    fail(pp, what);
  }
  if (params.contains("strong_convexity_mu")) {
    objective->strong_convexity_mu = read_number(params, "strong_convexity_mu", pp);
  }
  if (params.contains("sharpness")) {
    const json& s = params["sharpness"];
    objective->sharpness = Sharpness{read_number(s, "theta", pp + ".sharpness"), read_number(s, "M", pp + ".sharpness")};
  }
  inst.objective = std::move(objective);

  const json& reg = field(in, "region", "");
  const std::string kind = read_string(reg, "kind", "region");
  try {
    if (kind == "integer_box") {
      inst.region = make_integer_box(lower, upper, ints);
    } else if (kind == "budget") {
      Vector costs = read_vector(reg, "costs", "region");
      if (costs.size() != n) { fail("region.costs", "length differs from dimension"); }
      inst.region = make_budget(std::move(costs), read_number(reg, "budget", "region"), lower, upper, ints);
    } else if (kind == "milp") {
      milp::MilpModel m;
      m.base.objective.assign(n, 0.0);
      m.base.lower = lower;
      m.base.upper = upper;
      m.integer_indices = ints;
      const json& rows = field(reg, "rows", "region");
      if (!rows.is_array()) { fail("region.rows", "expected an array"); }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string rp = "region.rows[" + std::to_string(i) + "]";
        lp::Row r = read_row(rows[i], rp);
        if (r.coeffs.size() != n) { fail(rp + ".coeffs", "length differs from dimension"); }
        m.base.rows.push_back(std::move(r));
      }
      if (reg.contains("indicators")) {
        const json& inds = reg["indicators"];
        if (!inds.is_array()) { fail("region.indicators", "expected an array"); }
        for (std::size_t i = 0; i < inds.size(); ++i) {
          const std::string ip = "region.indicators[" + std::to_string(i) + "]";
          milp::IndicatorRow ind;
          ind.binary = read_index(field(inds[i], "binary", ip), ip + ".binary");
          ind.row = read_row(inds[i], ip);
          if (ind.row.coeffs.size() != n) { fail(ip + ".coeffs", "length differs from dimension"); }
          m.indicators.push_back(std::move(ind));
        }
      }
      inst.region = make_generic(std::move(m));
    } else {
      fail("region.kind", "unknown kind '" + kind + "'");
    }
    inst.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    if (what.rfind("instance field", 0) == 0) { throw; }
    fail("region", what);
  }
  return inst;
}

void save_instance(const std::filesystem::path& path, const ProblemInstance& instance)
{
  std::ofstream out(path);
  if (!out) { throw std::runtime_error("cannot write " + path.string()); }
  out << instance_to_json(instance) << '\n';
}

ProblemInstance load_instance(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) { throw std::runtime_error("cannot read " + path.string()); }
  std::stringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace hullfw
