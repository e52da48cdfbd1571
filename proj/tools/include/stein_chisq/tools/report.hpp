#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "stein_chisq/bounds.hpp"
#include "stein_chisq/distances.hpp"

namespace stein_chisq::tools {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

std::string tool_version();

// Provenance-tagged numbers. Every numeric in a report's outputs goes through
// one of these.
json stored_constant(double v);
json computed(double v);
json estimated(double v, double se);

json to_json(const BoundReport& b);
json to_json(const DistanceEstimate& d);

struct RunReport {
  std::string command;
  json inputs = json::object();
  json outputs = json::object();
  std::uint64_t seed = 0;
  /// Seconds; omitted from the JSON when empty.
  std::optional<double> wall_time;

  static RunReport make(std::string command, json inputs);
  json to_json() const;
};

}  // namespace stein_chisq::tools
