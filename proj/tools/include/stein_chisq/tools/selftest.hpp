#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "stein_chisq/constants.hpp"
#include "stein_chisq/tools/report.hpp"

namespace stein_chisq::tools {

enum class Scale { quick, full };
Scale parse_scale(const std::string& name);
std::string to_string(Scale s);

struct SuiteConfig {
  Scale scale = Scale::quick;
  std::uint64_t seed = 1;
};

/// One comparison inside a criterion. `relation` is "<=", ">=" or "~=" (the
/// last with `tolerance`, relative to max(1, |limit|)).
struct Check {
  std::string name;
  std::string relation;
  double value = 0.0;
  double limit = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Provenance of `value` and `limit` ("computed", "estimated", "paper-constant").
  std::string value_tag = "computed";
  std::string limit_tag = "computed";
  double se = 0.0;
  /// Runtime checks: the value is wall time and only appears under wall_time.
  bool timing = false;
};

Check at_most(std::string name, double value, double limit);
Check at_least(std::string name, double value, double limit);
Check close_to(std::string name, double value, double reference, double rel_tol);

/// An acceptance criterion: an expensive, constant-independent measurement
/// followed by a cheap judgement that reads the theorem constants.
class Criterion {
 public:
  virtual ~Criterion() = default;
  virtual std::string id() const = 0;
  virtual std::string title() const = 0;
  virtual void measure(const SuiteConfig& cfg) = 0;
  virtual std::vector<Check> judge(const BoundConstants& c) const = 0;
  /// Measurement summary for the report.
  virtual json details() const { return json::object(); }

  double seconds = 0.0;
};

struct CriterionResult {
  std::string id;
  std::string title;
  std::vector<Check> checks;
  json details;
  double seconds = 0.0;

  bool pass() const;
  std::size_t failures() const;
  /// One RunReport per criterion.
  RunReport report(const SuiteConfig& cfg, bool with_wall_time) const;
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;

  bool pass() const;
  std::vector<std::string> failing() const;
};

/// C1..C10 in order.
std::vector<std::unique_ptr<Criterion>> make_suite();

/// Measures and judges the selected criteria (all when `only` is empty).
/// C10 re-judges every other criterion with each constant multiplied by 10.
SuiteResult run_selftest(const SuiteConfig& cfg, const BoundConstants& c, const std::vector<std::string>& only = {});

}  // namespace stein_chisq::tools
