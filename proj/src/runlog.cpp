#include "hullfw/runlog.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace hullfw {

namespace {

using nlohmann::json;

// JSON has no infinities; they travel as strings
json number(double v)
{
  if (std::isnan(v)) { return "nan"; }
  if (std::isinf(v)) { return v > 0 ? "inf" : "-inf"; }
  return v;
}

double read_number(const json& j)
{
  if (j.is_number()) { return j.get<double>(); }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") { return std::numeric_limits<double>::infinity(); }
    if (s == "-inf") { return -std::numeric_limits<double>::infinity(); }
    if (s == "nan") { return std::numeric_limits<double>::quiet_NaN(); }
  }
  throw std::invalid_argument("expected a number, got " + j.dump());
}

}  // namespace

RunLog::RunLog() : start_(std::chrono::steady_clock::now()) {}

double RunLog::elapsed() const
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void RunLog::add(std::string kind, std::map<std::string, double> values)
{
  double t = elapsed();
  if (!events_.empty()) { t = std::max(t, events_.back().time); }
  events_.push_back({t, std::move(kind), std::move(values)});
}

std::string RunLog::to_json() const
{
  json out;
  out["header"] = {{"instance", header.instance},
                   {"solver", header.solver},
                   {"config_hash", header.config_hash},
                   {"seed", header.seed}};
  out["summary"] = {{"status", summary.status},         {"primal", number(summary.primal)},
                    {"dual", number(summary.dual)},      {"nodes", summary.nodes},
                    {"lmo_calls", summary.lmo_calls},    {"wall_seconds", number(summary.wall_seconds)}};
  json events = json::array();
  for (const auto& e : events_) {
    json values = json::object();
    for (const auto& [k, v] : e.values) { values[k] = number(v); }
    events.push_back({{"time", e.time}, {"kind", e.kind}, {"values", values}});
  }
  out["events"] = std::move(events);
  return out.dump(1);
}

RunLog RunLog::from_json(const std::string& text)
{
  try {
    const json in = json::parse(text);
    RunLog log;
    const json& h = in.at("header");
    log.header = {h.at("instance").get<std::string>(), h.at("solver").get<std::string>(),
                  h.at("config_hash").get<std::string>(), h.at("seed").get<std::uint64_t>()};
    const json& s = in.at("summary");
    log.summary = {s.at("status").get<std::string>(), read_number(s.at("primal")), read_number(s.at("dual")),
                   s.at("nodes").get<std::size_t>(),   s.at("lmo_calls").get<std::size_t>(),
                   read_number(s.at("wall_seconds"))};
    for (const json& e : in.at("events")) {
      RunEvent ev{e.at("time").get<double>(), e.at("kind").get<std::string>(), {}};
      for (const auto& [k, v] : e.at("values").items()) { ev.values[k] = read_number(v); }
      log.events_.push_back(std::move(ev));
    }
    return log;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("run log: ") + e.what());
  }
}

}  // namespace hullfw
