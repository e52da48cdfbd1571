#include "stein_chisq/distances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <boost/math/tools/roots.hpp>

#include "stein_chisq/error.hpp"
#include "stein_chisq/gamma_stein.hpp"
#include "stein_chisq/numerics.hpp"

namespace stein_chisq {

DistanceMode parse_distance_mode(const std::string& name) {
  if (name == "exact") return DistanceMode::exact;
  if (name == "mc") return DistanceMode::mc;
  throw InvalidArgument("mode must be 'exact' or 'mc'");
}

std::string to_string(DistanceMode mode) { return mode == DistanceMode::exact ? "exact" : "mc"; }

WeightedAtoms merge_atoms(std::vector<std::pair<double, double>> atoms) {
  std::sort(atoms.begin(), atoms.end());
  WeightedAtoms out;
  NeumaierSum mass;
  for (const auto& [x, p] : atoms) {
    if (!out.x.empty() && std::abs(x - out.x.back()) <= 1e-12 * std::max(1.0, std::abs(x))) {
      mass += p;
      continue;
    }
    if (!out.x.empty()) out.prob.push_back(mass.value());
    out.x.push_back(x);
    mass = NeumaierSum{};
    mass += p;
  }
  if (!out.x.empty()) out.prob.push_back(mass.value());
  return out;
}

WeightedAtoms pearson_law(const MultinomialModel& model, double budget) {
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(static_cast<std::size_t>(std::min(outcome_count(model.n(), model.m()), budget)));
  enumerate_multinomial(
      model, [&](const Counts& U, double lp) { atoms.emplace_back(pearson_statistic(model, U), std::exp(lp)); },
      budget);
  return merge_atoms(std::move(atoms));
}

namespace {

struct Lattice {
  double origin, step;
  std::vector<double> probs;  // masses at origin + step * index
};

Lattice lattice_of(IidLaw law) {
  const auto atoms = law_atoms(law);
  Lattice l{atoms.front().x, atoms.size() > 1 ? atoms[1].x - atoms[0].x : 1.0, {}};
  for (const auto& a : atoms) l.probs.push_back(a.prob);
  return l;
}

// Law of K in T = n * origin + step * K, with K the sum of n lattice indices.
std::vector<double> index_sum_pmf(const Lattice& l, int n) {
  std::vector<double> pmf{1.0};
  const std::size_t width = l.probs.size() - 1;
  for (int i = 0; i < n; ++i) {
    std::vector<double> next(pmf.size() + width, 0.0);
    for (std::size_t k = 0; k < pmf.size(); ++k)
      for (std::size_t a = 0; a < l.probs.size(); ++a) next[k + a] += pmf[k] * l.probs[a];
    pmf.swap(next);
  }
  return pmf;
}

}  // namespace

WeightedAtoms squared_clt_law(IidLaw law, int n, int d, double budget) {
  if (n < 1 || d < 1) throw InvalidArgument("squared-sum law needs n >= 1 and d >= 1");
  const Lattice l = lattice_of(law);
  const auto pmf = index_sum_pmf(l, n);
  if (d == 1) {
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      const double t = n * l.origin + l.step * static_cast<double>(k);
      atoms.emplace_back(t * t / n, pmf[k]);
    }
    return merge_atoms(std::move(atoms));
  }
  if (law != IidLaw::rademacher) throw InvalidArgument("exact squared-sum law for d > 1 needs the Rademacher law");
  // T = 2K - n is an integer, so sums of T^2 are exact integer keys.
  std::map<long long, double> col;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const long long t = 2 * static_cast<long long>(k) - n;
    col[t * t] += pmf[k];
  }
  std::map<long long, double> acc{{0, 1.0}};
  for (int c = 0; c < d; ++c) {
    if (static_cast<double>(acc.size()) * static_cast<double>(col.size()) > budget)
      throw BudgetExceeded("exact squared-sum law exceeds the budget; use Monte Carlo mode");
    std::map<long long, double> next;
    for (const auto& [a, pa] : acc)
      for (const auto& [b, pb] : col) next[a + b] += pa * pb;
    acc.swap(next);
  }
  WeightedAtoms out;
  for (const auto& [key, p] : acc) {
    out.x.push_back(static_cast<double>(key) / n);
    out.prob.push_back(p);
  }
  return out;
}

std::vector<double> sample_pearson(const MultinomialModel& model, std::size_t draws, std::uint64_t seed) {
  std::vector<double> w;
  w.reserve(draws);
  for (std::size_t start = 0, chunk = 0; start < draws; start += kChunkSize, ++chunk) {
    Rng rng(seed, chunk);
    const std::size_t end = std::min<std::size_t>(draws, start + kChunkSize);
    for (std::size_t i = start; i < end; ++i) w.push_back(pearson_statistic(model, sample_multinomial(model, rng)));
  }
  return w;
}

std::vector<double> sample_squared_clt(IidLaw law, int n, int d, std::size_t draws, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidArgument("squared-sum sampler needs n >= 1 and d >= 1");
  const auto atoms = law_atoms(law);
  std::vector<double> probs;
  for (const auto& a : atoms) probs.push_back(a.prob);
  const MultinomialModel counts(n, probs);
  std::vector<double> w;
  w.reserve(draws);
  for (std::size_t start = 0, chunk = 0; start < draws; start += kChunkSize, ++chunk) {
    Rng rng(seed, chunk);
    const std::size_t end = std::min<std::size_t>(draws, start + kChunkSize);
    for (std::size_t i = start; i < end; ++i) {
      double total = 0.0;
      for (int c = 0; c < d; ++c) {
        const Counts u = sample_multinomial(counts, rng);
        double t = 0.0;
        for (std::size_t a = 0; a < atoms.size(); ++a) t += u[a] * atoms[a].x;
        total += t * t;
      }
      w.push_back(total / n);
    }
  }
  return w;
}

DistanceEstimate smooth_distance_from_law(const WeightedAtoms& law, const TestFunction& h, double dof) {
  NeumaierSum e;
  for (std::size_t i = 0; i < law.x.size(); ++i) e += h.value(law.x[i]) * law.prob[i];
  DistanceEstimate out;
  out.expectation = e.value();
  out.reference = gamma_expectation(h, GammaParams::chi_square(dof));
  out.value = std::abs(out.expectation - out.reference);
  out.draws = law.x.size();
  return out;
}

DistanceEstimate smooth_distance_from_draws(const std::vector<double>& w, const TestFunction& h, double dof) {
  if (w.size() < 2) throw BudgetExceeded("Monte Carlo distance needs at least two draws");
  NeumaierSum s, s2;
  for (double x : w) {
    const double y = h.value(x);
    s += y;
    s2 += y * y;
  }
  const double n = static_cast<double>(w.size());
  DistanceEstimate out;
  out.mode = DistanceMode::mc;
  out.expectation = s.value() / n;
  out.reference = gamma_expectation(h, GammaParams::chi_square(dof));
  out.value = std::abs(out.expectation - out.reference);
  out.se = std::sqrt(std::max(0.0, (s2.value() - n * out.expectation * out.expectation) / (n - 1.0)) / n);
  out.draws = w.size();
  return out;
}

DistanceEstimate smooth_distance_pearson(const MultinomialModel& model, const TestFunction& h, DistanceMode mode,
                                         double budget, std::uint64_t seed) {
  const double dof = model.m() - 1.0;
  DistanceEstimate out;
  if (mode == DistanceMode::exact) {
    out = smooth_distance_from_law(pearson_law(model, budget), h, dof);
  } else {
    out = smooth_distance_from_draws(sample_pearson(model, static_cast<std::size_t>(budget), seed), h, dof);
    out.seed = seed;
  }
  out.n = model.n();
  return out;
}

DistanceEstimate smooth_distance_squared_clt(IidLaw law, int n, int d, const TestFunction& h, DistanceMode mode,
                                             double budget, std::uint64_t seed) {
  DistanceEstimate out;
  if (mode == DistanceMode::exact) {
    out = smooth_distance_from_law(squared_clt_law(law, n, d, budget), h, d);
  } else {
    out = smooth_distance_from_draws(sample_squared_clt(law, n, d, static_cast<std::size_t>(budget), seed), h, d);
    out.seed = seed;
  }
  out.n = n;
  return out;
}

double kolmogorov_from_atoms(const WeightedAtoms& law, double dof) {
  double worst = 0.0;
  NeumaierSum cum;
  for (std::size_t i = 0; i < law.x.size(); ++i) {
    const double g = chi_square_cdf(dof, law.x[i]);
    const double left = cum.value();
    cum += law.prob[i];
    const double right = std::min(1.0, cum.value());
    worst = std::max({worst, std::abs(left - g), std::abs(right - g)});
  }
  return worst;
}

namespace {

// int_0^z G(y) dy for the chi-square(d) CDF G: z G(z) - d G_{d+2}(z).
double cdf_integral(double dof, double z) {
  if (z <= 0.0) return 0.0;
  return z * chi_square_cdf(dof, z) - dof * chi_square_cdf(dof + 2.0, z);
}

// int_a^b |c - G(z)| dz.
double gap_integral(double dof, double c, double a, double b) {
  const double ga = chi_square_cdf(dof, a), gb = chi_square_cdf(dof, b);
  const double ia = cdf_integral(dof, a), ib = cdf_integral(dof, b);
  if (c <= ga) return (ib - ia) - c * (b - a);
  if (c >= gb) return c * (b - a) - (ib - ia);
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(50);
  auto root = boost::math::tools::toms748_solve([&](double z) { return chi_square_cdf(dof, z) - c; }, a, b,
                                                ga - c, gb - c, tol, iters);
  const double z = 0.5 * (root.first + root.second), iz = cdf_integral(dof, z);
  return (c * (z - a) - (iz - ia)) + ((ib - iz) - c * (b - z));
}

}  // namespace

double wasserstein_from_atoms(const WeightedAtoms& law, double dof) {
  NeumaierSum total, cum;
  double prev = 0.0;
  for (std::size_t i = 0; i < law.x.size(); ++i) {
    const double x = std::max(0.0, law.x[i]);
    if (x > prev) total += gap_integral(dof, std::min(1.0, cum.value()), prev, x);
    cum += law.prob[i];
    prev = std::max(prev, x);
  }
  // Tail beyond the last atom: int (1 - G) = E (Y - L)^+.
  const double tail = dof * (1.0 - chi_square_cdf(dof + 2.0, prev)) - prev * (1.0 - chi_square_cdf(dof, prev));
  total += std::max(0.0, tail);
  return total.value();
}

namespace {

WeightedAtoms empirical_law(std::vector<double> w) {
  std::vector<std::pair<double, double>> atoms;
  const double mass = 1.0 / static_cast<double>(w.size());
  for (double x : w) atoms.emplace_back(x, mass);
  return merge_atoms(std::move(atoms));
}

}  // namespace

DistanceEstimate kolmogorov_distance(const MultinomialModel& model, DistanceMode mode, double budget,
                                     std::uint64_t seed) {
  const double dof = model.m() - 1.0;
  DistanceEstimate out;
  out.mode = mode;
  out.n = model.n();
  if (mode == DistanceMode::exact) {
    const auto law = pearson_law(model, budget);
    out.value = kolmogorov_from_atoms(law, dof);
    out.draws = law.x.size();
  } else {
    const auto draws = static_cast<std::size_t>(budget);
    if (draws < 2) throw BudgetExceeded("Monte Carlo distance needs at least two draws");
    out.value = kolmogorov_from_atoms(empirical_law(sample_pearson(model, draws, seed)), dof);
    out.se = std::sqrt(std::log(2.0) / (2.0 * static_cast<double>(draws)));
    out.draws = draws;
    out.seed = seed;
  }
  return out;
}

DistanceEstimate wasserstein_distance(const MultinomialModel& model, DistanceMode mode, double budget,
                                      std::uint64_t seed) {
  const double dof = model.m() - 1.0;
  DistanceEstimate out;
  out.mode = mode;
  out.n = model.n();
  if (mode == DistanceMode::exact) {
    const auto law = pearson_law(model, budget);
    out.value = wasserstein_from_atoms(law, dof);
    out.draws = law.x.size();
  } else {
    const auto draws = static_cast<std::size_t>(budget);
    if (draws < 2) throw BudgetExceeded("Monte Carlo distance needs at least two draws");
    const auto w = sample_pearson(model, draws, seed);
    out.value = wasserstein_from_atoms(empirical_law(w), dof);
    // Batch-means standard error over ten equal batches.
    const std::size_t batches = 10, size = draws / batches;
    if (size >= 2) {
      NeumaierSum s, s2;
      for (std::size_t b = 0; b < batches; ++b) {
        std::vector<double> part(w.begin() + static_cast<std::ptrdiff_t>(b * size),
                                 w.begin() + static_cast<std::ptrdiff_t>((b + 1) * size));
        const double v = wasserstein_from_atoms(empirical_law(std::move(part)), dof);
        s += v;
        s2 += v * v;
      }
      const double k = static_cast<double>(batches), mean = s.value() / k;
      out.se = std::sqrt(std::max(0.0, (s2.value() - k * mean * mean) / (k - 1.0)) / k);
    }
    out.draws = draws;
    out.seed = seed;
  }
  return out;
}

AtomCheck rademacher_atom_check(int n) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("atom check needs an even n >= 2");
  if (n > 10000) throw InvalidArgument("atom check supports n <= 10000");
  AtomCheck a{};
  a.exact = std::exp(log_binomial(n, n / 2) - n * std::numbers::ln2);
  a.approx = std::sqrt(2.0 / (std::numbers::pi * n));
  a.ratio = a.exact / a.approx;
  return a;
}

Slope rate_slope(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> x, y;
  for (const auto& [n, d] : points) {
    if (!(n > 0.0)) throw InvalidArgument("rate fit needs positive n");
    if (!(d > 0.0)) throw InvalidArgument("rate fit needs positive distances");
    x.push_back(std::log(n));
    y.push_back(std::log(d));
  }
  auto [slope, se] = ols_slope(x, y);
  return {slope, se};
}

}  // namespace stein_chisq
