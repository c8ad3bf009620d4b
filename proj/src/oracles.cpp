#include "stoknap/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "stoknap/errors.hpp"
#include "stoknap/instance.hpp"

namespace stoknap {

std::uint64_t hoeffding_samples(double tau, double delta) {
  if (!(tau > 0 && tau < 1) || !(delta > 0 && delta < 1)) {
    throw std::invalid_argument("hoeffding_samples: tau and delta must lie in (0,1)");
  }
  return static_cast<std::uint64_t>(std::ceil(std::log(2.0 / delta) / (2.0 * tau * tau)));
}

namespace {

// The overflow samplers come in three flavors, picked per instance:
//  - deterministic: the sum is a.s. constant, the indicator is exact;
//  - lattice: all items discrete with a small common denominator, sums are
//    compared against the capacity in exact int64 arithmetic;
//  - floating: anything else; boundary ties have probability zero.
class SumSampler {
 public:
  SumSampler(std::span<const SizeDistribution> items, const Rational& capacity) {
    bool deterministic = true;
    bool discrete = true;
    for (const auto& dist : items) {
      if (!is_point_mass(dist)) deterministic = false;
      if (!is_discrete_exact(dist)) discrete = false;
    }
    if (deterministic) {
      Rational total = 0;
      for (const auto& dist : items) total += mean_rational(dist);
      kind_ = Kind::kDeterministic;
      overflow_certain_ = total > capacity;
      return;
    }
    if (discrete && build_lattice(items, capacity)) {
      kind_ = Kind::kLattice;
      return;
    }
    kind_ = Kind::kFloating;
    capacity_dbl_ = to_double(capacity);
    samplers_.reserve(items.size());
    for (const auto& dist : items) samplers_.push_back(make_sampler(dist));
  }

  std::uint64_t count_overflows(std::uint64_t samples, RngStream& rng) const {
    switch (kind_) {
      case Kind::kDeterministic:
        return overflow_certain_ ? samples : 0;
      case Kind::kLattice: {
        std::uint64_t hits = 0;
        for (std::uint64_t s = 0; s < samples; ++s) {
          std::int64_t sum = 0;
          for (const auto& item : lattice_items_) {
            double u = rng.uniform01();
            for (std::size_t a = 0;; ++a) {
              if (a + 1 == item.cum.size() || u < item.cum[a]) {
                sum += item.value[a];
                break;
              }
            }
          }
          hits += (sum > capacity_int_) ? 1 : 0;
        }
        return hits;
      }
      case Kind::kFloating: {
        std::uint64_t hits = 0;
        for (std::uint64_t s = 0; s < samples; ++s) {
          double sum = 0;
          for (const auto& draw : samplers_) sum += draw(rng);
          hits += (sum > capacity_dbl_) ? 1 : 0;
        }
        return hits;
      }
    }
    return 0;
  }

 private:
  enum class Kind { kDeterministic, kLattice, kFloating };

  struct LatticeItem {
    std::vector<double> cum;          // cumulative atom probabilities
    std::vector<std::int64_t> value;  // scaled atom values
  };

  bool build_lattice(std::span<const SizeDistribution> items, const Rational& capacity) {
    const Int kDenCap = Int(1) << 40;
    Int den = denominator(capacity);
    for (const auto& dist : items) {
      for (const auto& [v, q] : exact_atoms(dist)) {
        den = lcm(den, denominator(v));
        if (den > kDenCap) return false;
      }
    }
    Int max_abs = abs(numerator(capacity)) * (den / denominator(capacity));
    lattice_items_.clear();
    lattice_items_.reserve(items.size());
    for (const auto& dist : items) {
      LatticeItem li;
      double cum = 0;
      Int item_max = 0;
      for (const auto& [v, q] : exact_atoms(dist)) {
        Int scaled = numerator(v) * (den / denominator(v));
        item_max = std::max(item_max, Int(abs(scaled)));
        if (scaled < std::numeric_limits<std::int64_t>::min() / 2 ||
            scaled > std::numeric_limits<std::int64_t>::max() / 2) {
          return false;
        }
        cum += to_double(q);
        li.cum.push_back(cum);
        li.value.push_back(scaled.convert_to<std::int64_t>());
      }
      max_abs += item_max;
      lattice_items_.push_back(std::move(li));
    }
    if (max_abs > Int(std::numeric_limits<std::int64_t>::max() / 2)) return false;
    capacity_int_ = (numerator(capacity) * (den / denominator(capacity))).convert_to<std::int64_t>();
    return true;
  }

  Kind kind_ = Kind::kFloating;
  bool overflow_certain_ = false;
  std::vector<LatticeItem> lattice_items_;
  std::int64_t capacity_int_ = 0;
  double capacity_dbl_ = 0;
  std::vector<std::function<double(RngStream&)>> samplers_;
};

}  // namespace

OverflowEstimate mc_overflow(std::span<const SizeDistribution> items, const Rational& capacity,
                             double tau, double delta, RngStream& rng) {
  const std::uint64_t m = hoeffding_samples(tau, delta);
  SumSampler sampler(items, capacity);
  OverflowEstimate est;
  est.hits = sampler.count_overflows(m, rng);
  est.samples_used = m;
  est.point_estimate = static_cast<double>(est.hits) / static_cast<double>(m);
  est.half_width = tau;
  est.confidence = 1.0 - delta;
  return est;
}

bool leq_check(std::span<const SizeDistribution> items, const Rational& capacity,
               const Rational& q, const Rational& tau, double delta, RngStream& rng) {
  const std::uint64_t m = hoeffding_samples(to_double(tau), delta);
  SumSampler sampler(items, capacity);
  std::uint64_t hits = sampler.count_overflows(m, rng);
  // hits / m <= q, compared exactly.
  return Int(hits) * denominator(q) <= numerator(q) * Int(m);
}

Pmf exact_sum_pmf(std::span<const SizeDistribution> items, std::size_t atom_cap) {
  Pmf sum;
  sum.atoms.emplace_back(0, 1);
  for (const auto& dist : items) {
    if (!is_discrete_exact(dist)) {
      throw std::invalid_argument("exact_sum_pmf: continuous family '" + family_name(dist) +
                                  "' is unsupported");
    }
    Pmf item;
    item.atoms = exact_atoms(dist);
    sum = convolve(sum, item, atom_cap);
  }
  return sum;
}

Rational tv_distance_exact(const Pmf& a, const Pmf& b) {
  Rational l1 = 0;
  std::size_t i = 0, j = 0;
  while (i < a.atoms.size() || j < b.atoms.size()) {
    if (j == b.atoms.size() || (i < a.atoms.size() && a.atoms[i].first < b.atoms[j].first)) {
      l1 += a.atoms[i++].second;
    } else if (i == a.atoms.size() || b.atoms[j].first < a.atoms[i].first) {
      l1 += b.atoms[j++].second;
    } else {
      l1 += abs(a.atoms[i++].second - b.atoms[j++].second);
    }
  }
  return l1 / 2;
}

double tv_distance(const Pmf& a, const Pmf& b) { return to_double(tv_distance_exact(a, b)); }

Rational cdf_distance_exact(const Pmf& a, const Pmf& b) {
  Rational fa = 0, fb = 0, best = 0;
  std::size_t i = 0, j = 0;
  while (i < a.atoms.size() || j < b.atoms.size()) {
    Rational next;
    if (j == b.atoms.size()) {
      next = a.atoms[i].first;
    } else if (i == a.atoms.size()) {
      next = b.atoms[j].first;
    } else {
      next = std::min(a.atoms[i].first, b.atoms[j].first);
    }
    while (i < a.atoms.size() && a.atoms[i].first == next) fa += a.atoms[i++].second;
    while (j < b.atoms.size() && b.atoms[j].first == next) fb += b.atoms[j++].second;
    best = std::max(best, Rational(abs(fa - fb)));
  }
  return best;
}

double cdf_distance(const Pmf& a, const Pmf& b) { return to_double(cdf_distance_exact(a, b)); }

double cdf_distance_to_gaussian(const Pmf& pmf, double mean, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("cdf_distance_to_gaussian: sigma must be positive");
  auto phi = [mean, sigma](double t) {
    return 0.5 * std::erfc(-(t - mean) / (sigma * std::numbers::sqrt2));
  };
  double best = 0;
  double cum = 0;
  for (const auto& [v, q] : pmf.atoms) {
    double t = to_double(v);
    best = std::max(best, std::abs(cum - phi(t)));  // left limit of the step cdf
    cum += to_double(q);
    best = std::max(best, std::abs(cum - phi(t)));
  }
  return best;
}

namespace {

Pmf shifted_poisson_pmf(double lambda, long long shift, double tail_cut) {
  if (!(lambda > 0)) throw std::invalid_argument("poisson pmf: lambda must be positive");
  if (!(tail_cut > 0 && tail_cut < 1)) {
    throw std::invalid_argument("poisson pmf: tail_cut must lie in (0,1)");
  }
  std::vector<double> probs;
  double pk = std::exp(-lambda);
  double cum = pk;
  probs.push_back(pk);
  const std::size_t hard_cap =
      static_cast<std::size_t>(lambda + 60.0 * std::sqrt(lambda + 1.0) + 200.0);
  for (std::size_t k = 1; cum < 1.0 - tail_cut && k <= hard_cap; ++k) {
    pk *= lambda / static_cast<double>(k);
    probs.push_back(pk);
    cum += pk;
  }
  Pmf pmf;
  Rational total = 0;
  pmf.atoms.reserve(probs.size());
  for (std::size_t k = 0; k < probs.size(); ++k) {
    Rational q = rational_from_double(probs[k]);
    total += q;
    pmf.atoms.emplace_back(Rational(static_cast<long long>(k) + shift), q);
  }
  for (auto& [v, q] : pmf.atoms) q /= total;
  pmf.renormalized = true;
  return pmf;
}

}  // namespace

Pmf translated_poisson_pmf(double mu, double sigma2, double tail_cut) {
  if (!(sigma2 > 0)) throw std::invalid_argument("translated_poisson_pmf: sigma2 must be positive");
  const auto shift = static_cast<long long>(std::floor(mu - sigma2));
  return shifted_poisson_pmf(mu - static_cast<double>(shift), shift, tail_cut);
}

Pmf poisson_pmf(double lambda, double tail_cut) {
  return shifted_poisson_pmf(lambda, 0, tail_cut);
}

double levy_concentration(std::span<const SizeDistribution> items, double t,
                          std::size_t samples, RngStream& rng) {
  if (!(t > 0)) throw std::invalid_argument("levy_concentration: width must be positive");
  std::vector<std::function<double(RngStream&)>> samplers;
  samplers.reserve(items.size());
  for (const auto& dist : items) samplers.push_back(make_sampler(dist));
  std::vector<double> sums(samples);
  for (auto& s : sums) {
    double acc = 0;
    for (const auto& draw : samplers) acc += draw(rng);
    s = acc;
  }
  std::sort(sums.begin(), sums.end());
  // Largest number of samples inside a closed window [x_i, x_i + t].
  std::size_t best = 0, j = 0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (j < i) j = i;
    while (j + 1 < sums.size() && sums[j + 1] <= sums[i] + t) ++j;
    best = std::max(best, j - i + 1);
  }
  return static_cast<double>(best) / static_cast<double>(samples);
}

namespace {

// Shared DFS state for the exact brute-force oracle.
struct ExactEnumerator {
  const Instance& instance;
  std::size_t atom_cap;
  std::vector<Pmf> item_pmfs;
  BruteForceResult best;
  std::vector<int> current;

  explicit ExactEnumerator(const Instance& inst, std::size_t cap) : instance(inst), atom_cap(cap) {
    for (const auto& item : inst.items) {
      Pmf pmf;
      pmf.atoms = exact_atoms(item.dist);
      item_pmfs.push_back(std::move(pmf));
    }
  }

  void consider(const Pmf& pmf) {
    if (tail_prob(pmf, instance.capacity) > instance.overflow_budget) return;
    Rational profit = profit_of(instance, current);
    if (!best.feasible_found || profit > best.profit ||
        (profit == best.profit &&
         std::lexicographical_compare(current.begin(), current.end(), best.subset.begin(),
                                      best.subset.end()))) {
      best.feasible_found = true;
      best.profit = profit;
      best.subset = current;
    }
  }

  void walk(std::size_t i, const Pmf& pmf) {
    if (i == instance.items.size()) {
      consider(pmf);
      return;
    }
    current.push_back(static_cast<int>(i));
    walk(i + 1, convolve(pmf, item_pmfs[i], atom_cap));
    current.pop_back();
    walk(i + 1, pmf);
  }
};

// Monte Carlo brute force with common random numbers: one draw matrix shared
// by every subset, per-subset Hoeffding guarantee unchanged.
struct MonteCarloEnumerator {
  const Instance& instance;
  std::uint64_t m;
  double capacity_dbl;
  Int feas_num, feas_den;  // hits/m <= p  <=>  hits * feas_den <= feas_num * m
  std::vector<std::vector<double>> draws;
  BruteForceResult best;
  std::vector<int> current;

  MonteCarloEnumerator(const Instance& inst, const BruteForceConfig& config)
      : instance(inst),
        m(hoeffding_samples(config.tau, config.delta)),
        capacity_dbl(to_double(inst.capacity)),
        feas_num(numerator(inst.overflow_budget) * Int(m)),
        feas_den(denominator(inst.overflow_budget)) {
    draws.resize(inst.items.size());
    for (std::size_t i = 0; i < inst.items.size(); ++i) {
      RngStream stream(derive_seed(config.seed, "brute-item", i));
      auto sampler = make_sampler(inst.items[i].dist);
      draws[i].resize(m);
      for (auto& d : draws[i]) d = sampler(stream);
    }
  }

  void consider(const std::vector<double>& sums) {
    std::uint64_t hits = 0;
    for (double s : sums) hits += (s > capacity_dbl) ? 1 : 0;
    if (Int(hits) * feas_den > feas_num) return;
    Rational profit = profit_of(instance, current);
    if (!best.feasible_found || profit > best.profit ||
        (profit == best.profit &&
         std::lexicographical_compare(current.begin(), current.end(), best.subset.begin(),
                                      best.subset.end()))) {
      best.feasible_found = true;
      best.profit = profit;
      best.subset = current;
    }
  }

  void walk(std::size_t i, const std::vector<double>& sums) {
    if (i == instance.items.size()) {
      consider(sums);
      return;
    }
    std::vector<double> with = sums;
    const auto& d = draws[i];
    for (std::uint64_t s = 0; s < m; ++s) with[s] += d[s];
    current.push_back(static_cast<int>(i));
    walk(i + 1, with);
    current.pop_back();
    with.clear();
    with.shrink_to_fit();
    walk(i + 1, sums);
  }
};

}  // namespace

BruteForceResult brute_force_opt(const Instance& instance, const BruteForceConfig& config) {
  if (instance.items.size() > config.max_items) {
    throw BudgetError("brute_force_opt: " + std::to_string(instance.items.size()) +
                      " items exceed the cap of " + std::to_string(config.max_items));
  }
  bool discrete = std::all_of(instance.items.begin(), instance.items.end(),
                              [](const Item& item) { return is_discrete_exact(item.dist); });
  if (discrete && !config.force_monte_carlo) {
    ExactEnumerator dfs(instance, config.atom_cap);
    Pmf unit;
    unit.atoms.emplace_back(0, 1);
    dfs.walk(0, unit);
    dfs.best.exact = true;
    return dfs.best;
  }
  MonteCarloEnumerator dfs(instance, config);
  std::vector<double> zero(dfs.m, 0.0);
  dfs.walk(0, zero);
  dfs.best.exact = false;
  return dfs.best;
}

}  // namespace stoknap
