#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hullfw {

struct RunHeader
{
  std::string instance;
  std::string solver;
  std::string config_hash;
  std::uint64_t seed = 0;

  bool operator==(const RunHeader&) const = default;
};

struct RunEvent
{
  /// seconds since the log was started
  double time = 0.0;
  std::string kind;
  std::map<std::string, double> values;

  bool operator==(const RunEvent&) const = default;
};

struct RunSummary
{
  std::string status;
  double primal = 0.0;
  double dual = 0.0;
  std::size_t nodes = 0;
  std::size_t lmo_calls = 0;
  double wall_seconds = 0.0;

  bool operator==(const RunSummary&) const = default;
};

/// Append-only event stream of one solve.
class RunLog
{
 public:
  RunLog();

  RunHeader header;
  RunSummary summary;

  void add(std::string kind, std::map<std::string, double> values = {});
  const std::vector<RunEvent>& events() const { return events_; }
  double elapsed() const;

  std::string to_json() const;
  /// Throws std::invalid_argument on malformed input.
  static RunLog from_json(const std::string& text);

  bool operator==(const RunLog& other) const
  {
    return header == other.header && summary == other.summary && events_ == other.events_;
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::vector<RunEvent> events_;
};

}  // namespace hullfw
