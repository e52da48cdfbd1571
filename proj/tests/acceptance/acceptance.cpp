// Runs the acceptance suite and prints one line per criterion.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stein_chisq/tools/selftest.hpp"

namespace st = stein_chisq::tools;

namespace {

// The check closest to its limit, as "name: value rel limit".
std::string tightest(const st::CriterionResult& r) {
  const st::Check* worst = nullptr;
  double worst_slack = 0.0;
  for (const auto& c : r.checks) {
    if (!c.pass) return c.name + ": " + std::to_string(c.value) + " " + c.relation + " " + std::to_string(c.limit);
    if (c.timing || c.relation == "~=") continue;
    const double scale = std::max(std::abs(c.limit), 1e-300);
    const double slack = (c.relation == "<=" ? c.limit - c.value : c.value - c.limit) / scale;
    if (!worst || slack < worst_slack) {
      worst = &c;
      worst_slack = slack;
    }
  }
  if (!worst) return "";
  char buf[256];
  std::snprintf(buf, sizeof buf, "tightest %s: %.6g %s %.6g", worst->name.c_str(), worst->value,
                worst->relation.c_str(), worst->limit);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria runner"};
  std::string scale = "quick";
  std::uint64_t seed = 1;
  app.add_option("--scale", scale, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  app.add_option("--seed", seed, "Monte Carlo seed");
  CLI11_PARSE(app, argc, argv);

  const st::SuiteConfig cfg{st::parse_scale(scale), seed};
  const auto result = st::run_selftest(cfg, stein_chisq::BoundConstants::defaults());
  for (const auto& r : result.criteria) {
    std::printf("%-4s %s  %s (%zu/%zu checks, %.1f s)  %s\n", r.id.c_str(), r.pass() ? "PASS" : "FAIL",
                r.title.c_str(), r.checks.size() - r.failures(), r.checks.size(), r.seconds, tightest(r).c_str());
  }
  std::printf("%s\n", result.pass() ? "all criteria pass" : "some criteria fail");
  return result.pass() ? 0 : 1;
}
