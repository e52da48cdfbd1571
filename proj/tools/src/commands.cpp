#include "stein_chisq/tools/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stein_chisq/bounds.hpp"
#include "stein_chisq/distances.hpp"
#include "stein_chisq/error.hpp"
#include "stein_chisq/gamma_stein.hpp"
#include "stein_chisq/normal_stein.hpp"
#include "stein_chisq/numerics.hpp"
#include "stein_chisq/statistics.hpp"
#include "stein_chisq/test_functions.hpp"
#include "stein_chisq/tools/report.hpp"
#include "stein_chisq/tools/selftest.hpp"

namespace stein_chisq::tools {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("bad number '" + s + "' in " + what);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (const auto& s : split(text, ',')) {
    const double v = parse_real(s, what);
    if (v != std::floor(v) || v < 1 || v > 1e9) throw InvalidArgument("bad integer '" + s + "' in " + what);
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw InvalidArgument(what + " is empty");
  return out;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("STEIN_CHISQ_SEED");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("STEIN_CHISQ_SEED must be a non-negative integer");
}

json probabilities_json(const std::vector<double>& p) { return p; }

/// Everything a subcommand handler needs.
struct Context {
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out_path;
  bool wall_time = true;
  int exit_code = kExitOk;
  std::string text;  // rendered output
};

void emit(Context& ctx, RunReport report, std::chrono::steady_clock::time_point t0) {
  if (ctx.wall_time) report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ctx.text += report.to_json().dump(2) + "\n";
}

// ---------------------------------------------------------------- bound

json pearson_bounds(const NormBundle& norms, const MultinomialModel& model, const BoundConstants& c,
                    const std::vector<PearsonVariant>& variants) {
  json out = json::object();
  for (auto v : variants) {
    try {
      out[to_string(v)] = to_json(bound_pearson_smooth(norms, model, v, c));
    } catch (const MissingNorm& e) {
      out[to_string(v)] = {{"skipped", e.what()}};
    }
  }
  return out;
}

const std::vector<PearsonVariant> kAllVariants = {PearsonVariant::n1, PearsonVariant::sqrt, PearsonVariant::n1_pstar,
                                                  PearsonVariant::sqrt_pstar};

}  // namespace

std::vector<double> parse_probabilities(const std::string& text) {
  std::vector<double> p;
  if (text.rfind("uniform:", 0) == 0) {
    const double m = parse_real(text.substr(8), "--p");
    if (m != std::floor(m) || m < 2 || m > 1e6) throw InvalidArgument("uniform:m needs an integer m >= 2");
    p.assign(static_cast<std::size_t>(m), 1.0 / m);
  } else {
    for (const auto& s : split(text, ',')) p.push_back(parse_real(s, "--p"));
  }
  check_probability_vector(p);
  return p;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  Context ctx;
  std::function<void()> action;

  CLI::App app{"Stein's method bounds and exact distances for chi-square approximation", "stein-chisq"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());
  std::string seed_text;
  app.add_option("--seed", seed_text, "Seed (default: $STEIN_CHISQ_SEED or 1)");
  app.add_option("--format", ctx.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", ctx.out_path, "Write the report to PATH");
  bool no_wall_time = false;
  app.add_flag("--no-wall-time", no_wall_time, "Omit wall_time (byte-identical reruns)");

  // Shared option values.
  int n = 0, d = 1, k = 2, points = 1000;
  double r = 1.0, lambda = 0.5, budget = -1.0;
  std::string p_text, h_text = "cos:1", mode_text = "exact", law_text = "rademacher", variant_text = "all";
  std::string statistic = "pearson", ns_text = "16,32,64,128,256,512", x_text, f_text = "table";
  BoundConstants constants;

  auto add_n = [&](CLI::App* s, bool required = true) {
    auto* o = s->add_option("--n", n, "Number of trials")->check(CLI::Range(1, 1000000000));
    if (required) o->required();
  };
  auto add_p = [&](CLI::App* s) {
    s->add_option("--p", p_text, "Cell probabilities: 0.2,0.3,0.5 or uniform:m")->required();
  };
  auto add_h = [&](CLI::App* s) { s->add_option("--h", h_text, "Test function: cos:w, exp, logistic:s, halpha:z,a, const:c"); };
  auto add_mode = [&](CLI::App* s) {
    s->add_option("--mode", mode_text, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    s->add_option("--budget", budget, "Enumeration cap (exact) or draws (mc)");
  };
  auto sub = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    auto* s = parent->add_subcommand(name, help);
    s->set_help_flag("--help", "Print this help message and exit");
    s->fallthrough();
    return s;
  };

  // bound
  auto* bound = sub(&app, "bound", "Evaluate a theorem bound");
  bound->require_subcommand(1);
  auto* b_clt = sub(bound, "squared-clt", "Squared-sum statistic (d >= 1)");
  add_n(b_clt);
  b_clt->add_option("--d", d, "Dimension")->check(CLI::Range(1, 100000));
  b_clt->add_option("--law", law_text, "rademacher, uniform-discrete or shifted");
  add_h(b_clt);
  b_clt->callback([&] {
    action = [&] {
      const IidLaw law = parse_iid_law(law_text);
      const TestFunction h = parse_test_function(h_text);
      const MomentBundle mb = law_moments(law);
      auto rep = RunReport::make("bound squared-clt", {{"n", n}, {"d", d}, {"law", to_string(law)}, {"h", h_text}});
      json alphas = json::array();
      for (double a : squared_clt_alphas(mb.skew_abs, constants)) alphas.push_back(computed(a));
      rep.outputs = {{"bound", to_json(bound_squared_clt(h.certified_norms(), mb, n, d, constants))},
                     {"alphas", alphas}};
      rep.seed = ctx.seed;
      emit(ctx, rep, t0);
    };
  });

  auto* b_pearson = sub(bound, "pearson", "Pearson statistic, smooth test functions");
  add_n(b_pearson);
  add_p(b_pearson);
  add_h(b_pearson);
  b_pearson->add_option("--variant", variant_text, "n1, sqrt, n1-pstar, sqrt-pstar or all");
  b_pearson->callback([&] {
    action = [&] {
      const MultinomialModel model(n, parse_probabilities(p_text));
      const TestFunction h = parse_test_function(h_text);
      const auto variants =
          variant_text == "all" ? kAllVariants : std::vector<PearsonVariant>{parse_pearson_variant(variant_text)};
      auto rep = RunReport::make("bound pearson", {{"n", n}, {"p", probabilities_json(model.p())}, {"h", h_text}});
      rep.outputs = {{"bounds", pearson_bounds(h.certified_norms(), model, constants, variants)}};
      rep.seed = ctx.seed;
      emit(ctx, rep, t0);
    };
  });

  auto* b_kol = sub(bound, "kolmogorov", "Kolmogorov distance of Pearson's statistic");
  add_n(b_kol);
  add_p(b_kol);
  b_kol->callback([&] {
    action = [&] {
      const MultinomialModel model(n, parse_probabilities(p_text));
      const int m = model.m();
      const double t = n * model.p_star();
      const auto opt = smooth_to_kolmogorov([&](double a) { return smoothed_indicator_bound(t, a, constants); },
                                            [&](double a) { return chi_square_density_term(m, a); },
                                            default_alpha_grid(m, t, constants));
      const auto lit = bound_literature(n, model.p(), constants);
      const double alpha = stated_alpha(m, t, constants);
      auto rep = RunReport::make("bound kolmogorov", {{"n", n}, {"p", probabilities_json(model.p())}});
      rep.outputs = {{"bound", to_json(bound_kolmogorov_pearson(model, constants))},
                     {"stated_alpha", computed(alpha)},
                     {"objective_at_stated_alpha", computed(kolmogorov_objective(m, t, alpha, constants))},
                     {"optimized", {{"alpha", computed(opt.alpha)}, {"value", computed(opt.value)}}},
                     {"literature", {{"original", computed(lit.original)}, {"refined", computed(lit.refined)}}}};
      rep.seed = ctx.seed;
      emit(ctx, rep, t0);
    };
  });

  auto* b_lit = sub(bound, "literature", "Earlier published Kolmogorov bounds");
  add_n(b_lit);
  add_p(b_lit);
  b_lit->callback([&] {
    action = [&] {
      const auto p = parse_probabilities(p_text);
      const auto lit = bound_literature(n, p, constants);
      auto rep = RunReport::make("bound literature", {{"n", n}, {"p", probabilities_json(p)}});
      rep.outputs = {{"original", computed(lit.original)}, {"refined", computed(lit.refined)}};
      rep.seed = ctx.seed;
      emit(ctx, rep, t0);
    };
  });

  // distance
  auto* dist = sub(&app, "distance", "Exact or Monte Carlo distances to the chi-square limit");
  dist->require_subcommand(1);
  auto* d_smooth = sub(dist, "smooth", "|E h(W) - E h(chi-square)|");
  d_smooth->add_option("--statistic", statistic, "pearson or squared-clt")
      ->check(CLI::IsMember({"pearson", "squared-clt"}));
  add_n(d_smooth);
  d_smooth->add_option("--p", p_text, "Cell probabilities (pearson)");
  d_smooth->add_option("--d", d, "Dimension (squared-clt)")->check(CLI::Range(1, 100000));
  d_smooth->add_option("--law", law_text, "Law of X (squared-clt)");
  add_h(d_smooth);
  add_mode(d_smooth);
  d_smooth->callback([&] {
    action = [&] {
      const DistanceMode mode = parse_distance_mode(mode_text);
      const double bud = budget > 0 ? budget : (mode == DistanceMode::exact ? 1e7 : 1e6);
      const TestFunction h = parse_test_function(h_text);
      auto rep = RunReport::make("distance smooth", {{"statistic", statistic}, {"n", n}, {"h", h_text}, {"mode", mode_text}});
      rep.inputs["budget"] = bud;
      DistanceEstimate est;
      json bounds = json::object();
      bool hypotheses = true;
      std::vector<double> bound_values;
      if (statistic == "pearson") {
        if (p_text.empty()) throw InvalidArgument("--p is required for the Pearson statistic");
        const MultinomialModel model(n, parse_probabilities(p_text));
        rep.inputs["p"] = probabilities_json(model.p());
        est = smooth_distance_pearson(model, h, mode, bud, ctx.seed);
        hypotheses = model.every_cell_expected_at_least_one();
        for (auto v : kAllVariants) {
          try {
            const BoundReport b = bound_pearson_smooth(h.certified_norms(), model, v, constants);
            bounds[to_string(v)] = to_json(b);
            bound_values.push_back(b.value);
          } catch (const MissingNorm& e) {
            bounds[to_string(v)] = {{"skipped", e.what()}};
          }
        }
      } else {
        const IidLaw law = parse_iid_law(law_text);
        rep.inputs["d"] = d;
        rep.inputs["law"] = to_string(law);
        est = smooth_distance_squared_clt(law, n, d, h, mode, bud, ctx.seed);
        try {
          const BoundReport b = bound_squared_clt(h.certified_norms(), law_moments(law), n, d, constants);
          bounds["squared-clt"] = to_json(b);
          bound_values.push_back(b.value);
        } catch (const MissingNorm& e) {
          bounds["squared-clt"] = {{"skipped", e.what()}};
        }
      }
      bool dominated = true;
      for (double b : bound_values)
        if (est.value - 3 * est.se > b) dominated = false;
      rep.outputs = {{"distance", to_json(est)}, {"bounds", bounds}, {"dominated", dominated}};
      rep.seed = ctx.seed;
      if (hypotheses && !dominated) ctx.exit_code = kExitViolation;
      emit(ctx, rep, t0);
    };
  });

  auto* d_kol = sub(dist, "kolmogorov", "sup_z |P(W <= z) - P(chi-square <= z)| for Pearson's statistic");
  add_n(d_kol);
  add_p(d_kol);
  add_mode(d_kol);
  d_kol->callback([&] {
    action = [&] {
      const DistanceMode mode = parse_distance_mode(mode_text);
      const double bud = budget > 0 ? budget : (mode == DistanceMode::exact ? 1e7 : 1e6);
      const MultinomialModel model(n, parse_probabilities(p_text));
      const DistanceEstimate est = kolmogorov_distance(model, mode, bud, ctx.seed);
      const BoundReport b = bound_kolmogorov_pearson(model, constants);
      const bool dominated = est.value - 3 * est.se <= b.value;
      auto rep = RunReport::make("distance kolmogorov", {{"n", n}, {"p", probabilities_json(model.p())}, {"mode", mode_text}});
      rep.inputs["budget"] = bud;
      rep.outputs = {{"distance", to_json(est)}, {"bound", to_json(b)}, {"dominated", dominated}};
      rep.seed = ctx.seed;
      if (b.hypotheses_ok() && !dominated) ctx.exit_code = kExitViolation;
      emit(ctx, rep, t0);
    };
  });

  auto* d_w = sub(dist, "wasserstein", "integral |F_W - F_chi-square| for Pearson's statistic (no bound)");
  add_n(d_w);
  add_p(d_w);
  add_mode(d_w);
  d_w->callback([&] {
    action = [&] {
      const DistanceMode mode = parse_distance_mode(mode_text);
      const double bud = budget > 0 ? budget : (mode == DistanceMode::exact ? 1e7 : 1e6);
      const MultinomialModel model(n, parse_probabilities(p_text));
      auto rep = RunReport::make("distance wasserstein", {{"n", n}, {"p", probabilities_json(model.p())}, {"mode", mode_text}});
      rep.inputs["budget"] = bud;
      rep.outputs = {{"distance", to_json(wasserstein_distance(model, mode, bud, ctx.seed))}};
      rep.seed = ctx.seed;
      emit(ctx, rep, t0);
    };
  });

  // rate
  auto* rate = sub(&app, "rate", "Distances over a sequence of n with a log-log slope");
  rate->add_option("--statistic", statistic, "pearson, squared-clt or rademacher-atom")
      ->check(CLI::IsMember({"pearson", "squared-clt", "rademacher-atom"}));
  rate->add_option("--ns", ns_text, "Comma list of n");
  rate->add_option("--p", p_text, "Cell probabilities (pearson)");
  rate->add_option("--d", d, "Dimension (squared-clt)")->check(CLI::Range(1, 100000));
  rate->add_option("--law", law_text, "Law of X (squared-clt)");
  add_h(rate);
  add_mode(rate);
  rate->callback([&] {
    action = [&] {
      const auto ns = parse_int_list(ns_text, "--ns");
      const DistanceMode mode = parse_distance_mode(mode_text);
      const double bud = budget > 0 ? budget : (mode == DistanceMode::exact ? 1e7 : 1e6);
      struct Point {
        int n;
        double distance, se, bound;
      };
      std::vector<Point> pts;
      auto rep = RunReport::make("rate", {{"statistic", statistic}, {"ns", ns}, {"mode", mode_text}});
      rep.inputs["budget"] = bud;
      std::uint64_t stream = 0;
      for (int nn : ns) {
        const std::uint64_t s = mix_seed(ctx.seed, stream++);
        if (statistic == "rademacher-atom") {
          pts.push_back({nn, rademacher_atom_check(nn).exact, 0.0, std::nan("")});
        } else if (statistic == "pearson") {
          if (p_text.empty()) throw InvalidArgument("--p is required for the Pearson statistic");
          const MultinomialModel model(nn, parse_probabilities(p_text));
          const TestFunction h = parse_test_function(h_text);
          const auto est = smooth_distance_pearson(model, h, mode, bud, s);
          double b = std::nan("");
          try {
            b = bound_pearson_smooth(h.certified_norms(), model, PearsonVariant::sqrt, constants).value;
          } catch (const MissingNorm&) {
          }
          pts.push_back({nn, est.value, est.se, b});
          rep.inputs["p"] = probabilities_json(model.p());
          rep.inputs["h"] = h_text;
        } else {
          const IidLaw law = parse_iid_law(law_text);
          const TestFunction h = parse_test_function(h_text);
          const auto est = smooth_distance_squared_clt(law, nn, d, h, mode, bud, s);
          double b = std::nan("");
          try {
            b = bound_squared_clt(h.certified_norms(), law_moments(law), nn, d, constants).value;
          } catch (const MissingNorm&) {
          }
          pts.push_back({nn, est.value, est.se, b});
          rep.inputs["d"] = d;
          rep.inputs["law"] = to_string(law);
          rep.inputs["h"] = h_text;
        }
      }
      std::vector<std::pair<double, double>> xy;
      for (const auto& pt : pts) xy.emplace_back(pt.n, pt.distance);
      const Slope sl = rate_slope(xy);
      rep.seed = ctx.seed;
      if (ctx.format == "csv") {
        std::ostringstream os;
        os << std::setprecision(17);
        os << "# schema: " << kSchemaVersion << "\n# command: rate " << statistic << "\n";
        os << "n,distance,se,bound\n";
        for (const auto& pt : pts) os << pt.n << "," << pt.distance << "," << pt.se << "," << pt.bound << "\n";
        ctx.text += os.str();
        json slope{{"schema", kSchemaVersion}, {"slope", computed(sl.slope)}, {"se", computed(sl.se)}};
        ctx.text += "# slope: " + slope.dump() + "\n";
        return;
      }
      json arr = json::array();
      for (const auto& pt : pts) {
        json j{{"n", pt.n},
               {"distance", mode == DistanceMode::mc && statistic != "rademacher-atom" ? estimated(pt.distance, pt.se)
                                                                                        : computed(pt.distance)}};
        j["bound"] = std::isnan(pt.bound) ? json(nullptr) : computed(pt.bound);
        arr.push_back(j);
      }
      rep.outputs = {{"points", arr}, {"slope", estimated(sl.slope, sl.se)}};
      emit(ctx, rep, t0);
    };
  });

  // gamma
  auto* gamma = sub(&app, "gamma", "Gamma Stein equation solutions");
  gamma->require_subcommand(1);
  auto* g_solve = sub(gamma, "solve", "Derivatives f', ..., f^(k) of the solution");
  auto* g_verify = sub(gamma, "verify", "Residuals and bound domination for one (r, lambda, h)");
  for (auto* s : {g_solve, g_verify}) {
    s->add_option("--r", r, "Shape r > 0")->required();
    s->add_option("--lambda", lambda, "Rate lambda > 0");
    add_h(s);
    s->add_option("--k", k, "Highest derivative order")->check(CLI::Range(1, 8));
  }
  g_solve->add_option("--x", x_text, "Comma list of abscissae (default: the mean)");
  g_solve->callback([&] {
    action = [&] {
      const GammaParams gp(r, lambda);
      const DerivativeTable t(parse_test_function(h_text), gp, k);
      std::vector<double> xs;
      if (x_text.empty())
        xs.push_back(gp.mean());
      else
        for (const auto& s : split(x_text, ',')) xs.push_back(parse_real(s, "--x"));
      json rows = json::array();
      for (double x : xs) {
        if (!(x >= 0.0)) throw InvalidArgument("--x values must be >= 0");
        json row{{"x", x}};
        for (int j = 1; j <= k; ++j) row["f" + std::to_string(j)] = computed(t(j, x));
        rows.push_back(row);
      }
      auto rep = RunReport::make("gamma solve", {{"r", r}, {"lambda", lambda}, {"h", h_text}, {"k", k}});
      rep.outputs = {{"gamma_mean_h", computed(t.gamma_mean_h())}, {"derivatives", rows}};
      rep.seed = ctx.seed;
      emit(ctx, rep, t0);
    };
  });
  g_verify->callback([&] {
    action = [&] {
      const GammaParams gp(r, lambda);
      const TestFunction h = parse_test_function(h_text);
      const int kk = std::max(k, 2);
      const DerivativeTable t(h, gp, kk + 1);
      const Interval dom = verification_domain(gp);
      double res = 0.0;
      for (int i = 0; i <= 400; ++i) res = std::max(res, std::abs(t.stein_residual(dom.hi * i / 400.0)));
      bool ok = res <= 1e-6;
      json orders = json::array();
      for (int j = 1; j <= kk; ++j) {
        const double sf = sup_norm_estimate([&](double x) { return t(j, x); }, dom);
        const double sxf = sup_norm_estimate([&](double x) { return x * t(j, x); }, dom);
        const BoundCatalog cat = bound_catalog(gp, j, h.certified_norms(), constants);
        json bj = json::object(), wj = json::object();
        for (const auto& [name, b] : cat.derivative) {
          bj[name] = computed(b);
          ok = ok && sf <= b + 1e-8;
        }
        for (const auto& [name, b] : cat.weighted) {
          wj[name] = computed(b);
          ok = ok && sxf <= b + 1e-8;
        }
        orders.push_back({{"k", j},
                          {"sup_f", computed(sf)},
                          {"sup_xf", computed(sxf)},
                          {"derivative_bounds", bj},
                          {"weighted_bounds", wj},
                          {"skipped", cat.skipped}});
      }
      auto rep = RunReport::make("gamma verify", {{"r", r}, {"lambda", lambda}, {"h", h_text}, {"k", kk}});
      rep.outputs = {{"stein_residual", computed(res)}, {"orders", orders}, {"pass", ok}};
      rep.seed = ctx.seed;
      if (!ok) ctx.exit_code = kExitViolation;
      emit(ctx, rep, t0);
    };
  });

  // mvn
  auto* mvn = sub(&app, "mvn", "Multivariate normal Stein operator");
  mvn->require_subcommand(1);
  auto* m_cmp = sub(mvn, "compare", "A_MVN g vs the chi-square operator on the constraint surface");
  add_p(m_cmp);
  m_cmp->add_option("--f", f_text, "w, w2 or table (the chi-square solution for --h)")
      ->check(CLI::IsMember({"w", "w2", "table"}));
  add_h(m_cmp);
  m_cmp->add_option("--points", points, "Number of sampled points")->check(CLI::Range(1, 10000000));
  m_cmp->callback([&] {
    action = [&] {
      const ConstrainedGaussian model(parse_probabilities(p_text));
      const int m = model.dim();
      std::unique_ptr<DerivativeTable> table;
      Profile f;
      if (f_text == "w") {
        f = polynomial_profile({0.0, 1.0});
      } else if (f_text == "w2") {
        f = polynomial_profile({0.0, 0.0, 1.0});
      } else {
        table = std::make_unique<DerivativeTable>(parse_test_function(h_text), GammaParams::chi_square(m - 1.0), 2);
        f = interpolated_profile(*table, 1, 2, 128.0);
      }
      const Eigen::MatrixXd pts = model.sample(ctx.seed, static_cast<std::size_t>(points));
      double gap = 0.0, constraint = 0.0;
      for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        const Eigen::VectorXd s = pts.row(i).transpose();
        const OperatorComparison oc = operator_comparison(f, model, s);
        gap = std::max(gap, std::abs(oc.mvn - oc.chisq));
        constraint = std::max(constraint, std::abs(model.sqrt_p().dot(s)));
      }
      auto rep = RunReport::make("mvn compare", {{"p", probabilities_json(model.p())}, {"f", f_text}, {"points", points}});
      if (f_text == "table") rep.inputs["h"] = h_text;
      rep.outputs = {{"max_abs_difference", computed(gap)}, {"max_constraint", computed(constraint)},
                     {"pass", gap <= 1e-9}};
      rep.seed = ctx.seed;
      if (gap > 1e-9) ctx.exit_code = kExitViolation;
      emit(ctx, rep, t0);
    };
  });

  // stats
  auto* stats = sub(&app, "stats", "Multinomial and leave-one-out statistics");
  stats->require_subcommand(1);
  auto* s_enum = sub(stats, "enumerate", "Exact law of Pearson's statistic");
  add_n(s_enum);
  add_p(s_enum);
  s_enum->add_option("--budget", budget, "Enumeration cap");
  s_enum->callback([&] {
    action = [&] {
      const MultinomialModel model(n, parse_probabilities(p_text));
      const double bud = budget > 0 ? budget : 1e7;
      NeumaierSum total, mean, second;
      std::size_t outcomes = 0;
      enumerate_multinomial(
          model,
          [&](const Counts& U, double lp) {
            const double pr = std::exp(lp), w = pearson_statistic(model, U);
            total += pr;
            mean += pr * w;
            second += pr * w * w;
            ++outcomes;
          },
          bud);
      const double mw = mean.value();
      auto rep = RunReport::make("stats enumerate", {{"n", n}, {"p", probabilities_json(model.p())}});
      rep.inputs["budget"] = bud;
      rep.outputs = {{"outcomes", outcomes},
                     {"total_probability", computed(total.value())},
                     {"mean", computed(mw)},
                     {"variance", computed(second.value() - mw * mw)},
                     {"atoms", pearson_law(model, bud).x.size()}};
      rep.seed = ctx.seed;
      emit(ctx, rep, t0);
    };
  });
  auto* s_mom = sub(stats, "moments", "Leave-one-out moments per cell");
  add_n(s_mom);
  add_p(s_mom);
  s_mom->callback([&] {
    action = [&] {
      const auto p = parse_probabilities(p_text);
      json cells = json::array();
      for (double pj : p) {
        const LooMoments a = leave_one_out_moments(n, pj), b = oracle_leave_one_out_moments(n, pj);
        cells.push_back({{"p", pj},
                         {"np_at_least_one", n * pj >= 1.0},
                         {"closed_form", {{"m2", computed(a.m2)}, {"m4", computed(a.m4)}, {"m6", computed(a.m6)}}},
                         {"enumeration", {{"m2", computed(b.m2)}, {"m4", computed(b.m4)}, {"m6", computed(b.m6)}}},
                         {"caps",
                          {{"m2", stored_constant(constants.loo_m2_cap)},
                           {"m4", stored_constant(constants.loo_m4_cap)},
                           {"m6", stored_constant(constants.loo_m6_cap)}}}});
      }
      auto rep = RunReport::make("stats moments", {{"n", n}, {"p", probabilities_json(p)}});
      rep.outputs = {{"cells", cells}};
      rep.seed = ctx.seed;
      emit(ctx, rep, t0);
    };
  });

  // selftest
  auto* self = sub(&app, "selftest", "Run the acceptance suite");
  std::string scale_text = "quick", only_text;
  std::vector<std::string> constant_overrides;
  self->add_option("--scale", scale_text, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  self->add_option("--only", only_text, "Comma list of criterion ids, e.g. C1,C6");
  self->add_option("--constant", constant_overrides, "Override a stored constant: NAME=VALUE (repeatable)");
  self->callback([&] {
    action = [&] {
      for (const auto& ov : constant_overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) throw InvalidArgument("--constant expects NAME=VALUE");
        constants.set(ov.substr(0, eq), parse_real(ov.substr(eq + 1), "--constant"));
      }
      SuiteConfig cfg;
      cfg.scale = parse_scale(scale_text);
      cfg.seed = ctx.seed;
      const auto only = only_text.empty() ? std::vector<std::string>{} : split(only_text, ',');
      const SuiteResult res = run_selftest(cfg, constants, only);
      for (const auto& cr : res.criteria) {
        ctx.text += cr.report(cfg, ctx.wall_time).to_json().dump() + "\n";
        err << cr.id << " " << (cr.pass() ? "PASS" : "FAIL") << "  " << cr.title;
        if (!cr.pass()) {
          err << "  [";
          bool first = true;
          for (const auto& c : cr.checks)
            if (!c.pass) {
              err << (first ? "" : "; ") << c.name;
              first = false;
            }
          err << "]";
        }
        err << "\n";
      }
      auto summary = RunReport::make("selftest", {{"scale", scale_text}});
      json overrides = json::object();
      for (const auto& ov : constant_overrides) {
        const auto eq = ov.find('=');
        overrides[ov.substr(0, eq)] = stored_constant(constants.get(ov.substr(0, eq)));
      }
      summary.inputs["constant_overrides"] = overrides;
      summary.outputs = {{"pass", res.pass()}, {"failing", res.failing()}, {"criteria", res.criteria.size()}};
      summary.seed = ctx.seed;
      if (ctx.wall_time)
        summary.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      ctx.text += summary.to_json().dump() + "\n";
      if (!res.pass()) {
        ctx.exit_code = kExitViolation;
        err << "failing criteria:";
        for (const auto& id : res.failing()) err << " " << id;
        err << "\n";
      }
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

  try {
    ctx.seed = seed_text.empty() ? default_seed() : static_cast<std::uint64_t>(std::stoull(seed_text));
    ctx.wall_time = !no_wall_time;
    if (ctx.format == "csv" && !rate->parsed()) throw InvalidArgument("--format csv is only available for rate");
    if (!action) throw InvalidArgument("no command given");
    action();
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const MissingNorm& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: bad --seed\n";
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    err << "error: value out of range\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }

  if (ctx.out_path.empty()) {
    out << ctx.text;
  } else {
    std::ofstream f(ctx.out_path);
    if (!f) {
      err << "error: cannot write " << ctx.out_path << "\n";
      return kExitInvalid;
    }
    f << ctx.text;
  }
  return ctx.exit_code;
}

}  // namespace stein_chisq::tools
