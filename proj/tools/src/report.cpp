#include "stein_chisq/tools/report.hpp"

#include <cmath>

#ifndef STEIN_CHISQ_VERSION
#define STEIN_CHISQ_VERSION "0.0.0"
#endif

namespace stein_chisq::tools {

std::string tool_version() { return STEIN_CHISQ_VERSION; }

namespace {

json number(double v) {
  // JSON has no inf/nan.
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json tagged(double v, const char* tag) {
  json j;
  j["value"] = number(v);
  j["provenance"] = tag;
  return j;
}

}  // namespace

json stored_constant(double v) { return tagged(v, "paper-constant"); }
json computed(double v) { return tagged(v, "computed"); }

json estimated(double v, double se) {
  json j;
  j["value"] = number(v);
  j["se"] = number(se);
  j["provenance"] = "estimated";
  return j;
}

json to_json(const BoundReport& b) {
  json j;
  j["theorem"] = b.theorem;
  json in = json::object();
  for (const auto& [k, v] : b.inputs) in[k] = computed(v);
  j["inputs"] = in;
  j["value"] = computed(b.value);
  j["hypotheses_satisfied"] = b.hypotheses_ok();
  j["unsatisfied"] = b.unsatisfied;
  return j;
}

json to_json(const DistanceEstimate& d) {
  json j;
  const bool mc = d.mode == DistanceMode::mc;
  j["value"] = mc ? estimated(d.value, d.se) : computed(d.value);
  j["mode"] = to_string(d.mode);
  j["n"] = d.n;
  j["draws"] = d.draws;
  if (mc) j["seed"] = d.seed;
  if (d.expectation != 0.0 || d.reference != 0.0) {
    j["expectation"] = mc ? estimated(d.expectation, d.se) : computed(d.expectation);
    j["reference"] = computed(d.reference);
  }
  return j;
}

RunReport RunReport::make(std::string command, json inputs) {
  RunReport r;
  r.command = std::move(command);
  r.inputs = std::move(inputs);
  return r;
}

json RunReport::to_json() const {
  json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["seed"] = seed;
  j["version"] = tool_version();
  if (wall_time) j["wall_time"] = *wall_time;
  return j;
}

}  // namespace stein_chisq::tools
