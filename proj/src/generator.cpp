#include "stoknap/generator.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "stoknap/rng.hpp"

namespace stoknap {

namespace {

long long pick(RngStream& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

Rational random_profit(RngStream& rng, bool unit) {
  if (unit) return 1;
  return Rational(pick(rng, 1, 80), 4);
}

// Capacity at a seeded fraction of the mean total size, snapped to quarters.
Rational pick_capacity(RngStream& rng, const Rational& mean_sum, long long lo_pct,
                       long long hi_pct) {
  Rational frac(pick(rng, lo_pct, hi_pct), 100);
  Rational c = round_to_multiple(mean_sum * frac, Rational(1, 4));
  return std::max(c, Rational(1, 4));
}

Rational pick_budget(RngStream& rng) { return Rational(pick(rng, 4, 10), 20); }

Instance gen_bernoulli(const GenOptions& options, RngStream& rng) {
  Instance instance;
  Rational mean_sum = 0;
  for (std::size_t i = 0; i < options.n; ++i) {
    Rational p(pick(rng, 5, 95), 100);
    mean_sum += p;
    instance.items.push_back(Item{Bernoulli{p}, random_profit(rng, options.unit_profits)});
  }
  instance.capacity = pick_capacity(rng, mean_sum, 75, 120);
  instance.overflow_budget = pick_budget(rng);
  return instance;
}

Instance gen_ksupport(const GenOptions& options, RngStream& rng) {
  if (options.k < 2 || options.k > 6) {
    throw std::invalid_argument("gen ksupport: k must lie in [2,6]");
  }
  std::vector<Rational> pool;
  for (long long j = 0; j <= 12; ++j) pool.emplace_back(j, 4);
  std::set<Rational> chosen;
  while (static_cast<int>(chosen.size()) < options.k) {
    chosen.insert(pool[pick(rng, 0, static_cast<long long>(pool.size()) - 1)]);
  }
  std::vector<Rational> support(chosen.begin(), chosen.end());

  Instance instance;
  Rational mean_sum = 0;
  for (std::size_t i = 0; i < options.n; ++i) {
    std::vector<Rational> probs;
    long long total = 0;
    std::vector<long long> weights;
    for (int j = 0; j < options.k; ++j) {
      weights.push_back(pick(rng, 1, 9));
      total += weights.back();
    }
    Rational mean = 0;
    for (int j = 0; j < options.k; ++j) {
      probs.emplace_back(weights[j], total);
      mean += probs.back() * support[j];
    }
    mean_sum += mean;
    instance.items.push_back(
        Item{Finite{support, std::move(probs)}, random_profit(rng, options.unit_profits)});
  }
  instance.capacity = pick_capacity(rng, mean_sum, 70, 115);
  instance.overflow_budget = pick_budget(rng);
  return instance;
}

Instance gen_hyper(const GenOptions& options, RngStream& rng) {
  Instance instance;
  Rational mean_sum = 0;
  for (std::size_t i = 0; i < options.n; ++i) {
    SizeDistribution dist;
    switch (pick(rng, 0, 4)) {
      case 0:
        dist = Gaussian{static_cast<double>(pick(rng, 4, 12)) / 4.0,
                        static_cast<double>(pick(rng, 4, 25)) / 100.0};
        break;
      case 1:
        dist = Exponential{static_cast<double>(pick(rng, 4, 16)) / 8.0};
        break;
      case 2:
        dist = Laplace{static_cast<double>(pick(rng, 4, 10)) / 4.0,
                       static_cast<double>(pick(rng, 2, 7)) / 20.0};
        break;
      case 3: {
        double a = static_cast<double>(pick(rng, 0, 4)) / 4.0;
        dist = Uniform{a, a + static_cast<double>(pick(rng, 2, 6)) / 4.0};
        break;
      }
      default: {
        int atoms = static_cast<int>(pick(rng, 2, 3));
        std::set<Rational> values;
        while (static_cast<int>(values.size()) < atoms) values.insert(Rational(pick(rng, 0, 12), 4));
        std::vector<Rational> support(values.begin(), values.end());
        std::vector<long long> weights;
        long long total = 0;
        for (int a = 0; a < atoms; ++a) {
          weights.push_back(pick(rng, 1, 9));
          total += weights.back();
        }
        std::vector<Rational> probs;
        for (int a = 0; a < atoms; ++a) probs.emplace_back(weights[a], total);
        dist = Finite{std::move(support), std::move(probs)};
        break;
      }
    }
    mean_sum += mean_rational(dist);
    instance.items.push_back(Item{std::move(dist), random_profit(rng, options.unit_profits)});
  }
  instance.capacity = pick_capacity(rng, mean_sum, 60, 90);
  instance.overflow_budget = pick_budget(rng);
  return instance;
}

Instance gen_pointmass(const GenOptions& options, RngStream& rng) {
  Instance instance;
  Rational weight_sum = 0;
  for (std::size_t i = 0; i < options.n; ++i) {
    Rational w(pick(rng, 1, 12));
    weight_sum += w;
    instance.items.push_back(Item{Finite{{w}, {Rational(1)}},
                                  Rational(pick(rng, 1, std::max(1, options.max_profit)))});
  }
  instance.capacity = std::max(Rational(1), Rational(floor_rational(
                                  weight_sum * Rational(pick(rng, 40, 70), 100))));
  instance.overflow_budget = Rational(1, 4);
  return instance;
}

}  // namespace

Instance generate_instance(const GenOptions& options) {
  if (options.n == 0) throw std::invalid_argument("generate_instance: n must be positive");
  RngStream rng(derive_seed(options.seed, "gen-" + options.family, options.n,
                            static_cast<std::uint64_t>(options.k)));
  Instance instance;
  if (options.family == "bernoulli") {
    instance = gen_bernoulli(options, rng);
  } else if (options.family == "ksupport") {
    instance = gen_ksupport(options, rng);
  } else if (options.family == "hyper") {
    instance = gen_hyper(options, rng);
  } else if (options.family == "pointmass") {
    instance = gen_pointmass(options, rng);
  } else {
    throw std::invalid_argument("generate_instance: unknown family '" + options.family + "'");
  }
  instance.seed = options.seed;
  validate(instance);
  return instance;
}

}  // namespace stoknap
