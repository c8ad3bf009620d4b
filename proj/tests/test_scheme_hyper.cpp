#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "stoknap/errors.hpp"
#include "stoknap/generator.hpp"
#include "stoknap/oracles.hpp"
#include "stoknap/scheme_hyper.hpp"
#include "testutil.hpp"

using namespace stoknap;

namespace {

Instance coin_instance(int n, Rational capacity, Rational budget,
                       std::vector<Rational> profits = {}) {
  Instance inst;
  for (int i = 0; i < n; ++i) {
    inst.items.push_back(Item{Finite{{0, 1}, {Rational(1, 2), Rational(1, 2)}},
                              profits.empty() ? Rational(1) : profits[i]});
  }
  inst.capacity = std::move(capacity);
  inst.overflow_budget = std::move(budget);
  return inst;
}

Instance pointmass_instance(const std::vector<long long>& sizes,
                            const std::vector<Rational>& profits, Rational capacity,
                            Rational budget) {
  Instance inst;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    inst.items.push_back(Item{Finite{{Rational(sizes[i])}, {Rational(1)}}, profits[i]});
  }
  inst.capacity = std::move(capacity);
  inst.overflow_budget = std::move(budget);
  return inst;
}

// Empirical cdf distance between two sorted sample vectors.
double empirical_cdf_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double best = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      ++i;
    } else {
      ++j;
    }
    best = std::max(best, std::abs(static_cast<double>(i) / a.size() -
                                   static_cast<double>(j) / b.size()));
  }
  return best;
}

}  // namespace

TEST_CASE("critical index on small sequences") {
  std::vector<Rational> vars = {8, 4, 2, 1};
  // Threshold 3/5: 8/15 qualifies immediately.
  CHECK(critical_index(vars, Rational(1), Rational(5, 3)) == 1);
  // Threshold 3/10: ratios 8/15, 4/7, 2/3, 1 all exceed it.
  CHECK(critical_index(vars, Rational(1), Rational(10, 3)) == kNoCriticalIndex);
  // Equal variances: ratio 1/n at the first position.
  std::vector<Rational> equal(5, Rational(2));
  CHECK(critical_index(equal, Rational(1), Rational(5)) == 1);
  // All-zero variances report index 1 by convention.
  std::vector<Rational> zeros(4, Rational(0));
  CHECK(critical_index(zeros, Rational(1, 4), Rational(1)) == 1);
}

TEST_CASE("critical index weakly decreases as eps grows") {
  RngStream rng(1234);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Rational> vars;
    for (int i = 0; i < 10; ++i) vars.emplace_back(1 + static_cast<long long>(rng.next_u64() % 64), 8);
    std::sort(vars.rbegin(), vars.rend());
    std::size_t last = kNoCriticalIndex;
    for (long long num = 1; num <= 12; ++num) {
      std::size_t idx = critical_index(vars, Rational(num, 4), Rational(3));
      if (last != kNoCriticalIndex) CHECK(idx <= last);
      if (idx != kNoCriticalIndex) last = idx;
    }
  }
}

TEST_CASE("type cap and type enumeration") {
  CHECK(type_cap(1.0, Rational(1, 2)) == 4);  // ceil(4 * log2 2) = 4
  CHECK(type_cap(3.0, Rational(1, 2)) == 12);
  CHECK(type_cap(1.0, Rational(2)) == 0);  // degenerate eps >= 1: empty type only

  Instance inst = coin_instance(3, Rational(2), Rational(1, 2));
  // c = 1 (symmetric coins), eps = 3/4 gives cap 1: the empty type plus the
  // three singletons, in index order.
  std::vector<EpsilonType> types = enumerate_types(inst, Rational(3, 4), 1.0, 1000);
  REQUIRE(types.size() == 4);
  CHECK(types[0].prefix.empty());
  CHECK(types[1].prefix == std::vector<int>{0});
  CHECK(types[2].prefix == std::vector<int>{1});
  CHECK(types[3].prefix == std::vector<int>{2});

  CHECK_THROWS_WITH_AS(enumerate_types(inst, Rational(3, 4), 1.0, 2),
                       doctest::Contains("4 types"), BudgetError);
}

TEST_CASE("window scales satisfy the two-sided inequalities") {
  // pivot variance 1, n = 4, eps = 1/2.
  Rational rho_large = hyper_detail::large_window_rho(1, 4, Rational(1, 2));
  CHECK(rho_large == Rational(1, 128));
  CHECK(Rational(16) * rho_large / Rational(1, 4) <= 1);
  CHECK(Rational(2) * 16 * rho_large / Rational(1, 4) >= 1);

  Rational rho_small = hyper_detail::small_window_rho(1, 4, Rational(1, 2));
  CHECK(rho_small == Rational(1, 8192));
  CHECK(Rational(256) * rho_small / Rational(1, 16) <= 1);
  CHECK(Rational(2) * 256 * rho_small / Rational(1, 16) >= 1);
}

TEST_CASE("variance rounding drops less than one rho") {
  RngStream rng(555);
  for (int trial = 0; trial < 50; ++trial) {
    Rational var(1 + static_cast<long long>(rng.next_u64() % 1000),
                 1 + static_cast<long long>(rng.next_u64() % 100));
    Rational rho(1 + static_cast<long long>(rng.next_u64() % 50),
                 1 + static_cast<long long>(rng.next_u64() % 1000));
    Rational beta = Rational(floor_quotient(var, rho)) * rho;
    CHECK(beta <= var);
    CHECK(var - beta < rho);
  }
}

TEST_CASE("large-case candidates keep the fixed prefix and scan below it") {
  // Symmetric coins have kurtosis 1, so eps = .7 gives the minimum cap 2 and
  // length-2 types go through the large route.
  Instance inst = coin_instance(4, Rational(2), Rational(1, 2));
  const Rational eps(7, 10);
  REQUIRE(type_cap(1.0, eps) == 2);
  hyper_detail::VarOrder order = hyper_detail::make_var_order(inst);
  EpsilonType type{{order.sorted[0], order.sorted[1]}};
  auto candidates =
      hyper_detail::large_type_candidates(inst, order, type, eps, Rational(1), SolverConfig{});
  REQUIRE(!candidates.empty());
  const int pivot = order.sorted[0];  // j_{L-1} with L = 2
  for (const auto& cand : candidates) {
    CHECK(std::find(cand.subset.begin(), cand.subset.end(), pivot) != cand.subset.end());
    for (int idx : cand.subset) {
      if (idx == pivot) continue;
      CHECK(order.rank[idx] > order.rank[pivot]);
    }
  }
}

TEST_CASE("sk_hyper_large finds a profit-matching gated subset") {
  Instance inst = coin_instance(4, Rational(3), Rational(1, 2));
  const Rational eps(7, 10);
  hyper_detail::VarOrder order = hyper_detail::make_var_order(inst);
  EpsilonType type{{order.sorted[0], order.sorted[1]}};
  Gate gate(distributions_of(inst), inst.capacity, Rational(1), Rational(1, 8), 1e-9, 99);
  auto subset = sk_hyper_large(inst, type, Int(3), eps, gate);
  REQUIRE(subset.has_value());
  CHECK(profit_of(inst, *subset) == 3);
  CHECK(std::find(subset->begin(), subset->end(), order.sorted[0]) != subset->end());
}

TEST_CASE("small-case window collapses to the bare prefix when empty") {
  // n = 4, c^4 = 9, eps = 1/4: the window's lower end exceeds its upper end,
  // so only the bare prefix candidates remain.
  Instance inst;
  for (int i = 0; i < 4; ++i) inst.items.push_back(Item{Exponential{1.0 + i}, Rational(1)});
  inst.capacity = 3;
  inst.overflow_budget = Rational(1, 4);
  const Rational eps(1, 4);
  const Rational c4(9);
  const Rational n4(256);
  REQUIRE(c4 * n4 / pow_rational(eps, 6) - 4 > 2 * n4 * 4 / pow_rational(eps, 4));

  hyper_detail::VarOrder order = hyper_detail::make_var_order(inst);
  EpsilonType type{{order.sorted[0]}};
  auto candidates =
      hyper_detail::small_type_candidates(inst, order, type, eps, c4, SolverConfig{});
  REQUIRE(candidates.size() == 1);
  CHECK(candidates[0].window_slot == -1);
  CHECK(candidates[0].subset == std::vector<int>{order.sorted[0]});
}

TEST_CASE("reduce_profits spec arithmetic") {
  SUBCASE("mixed profits") {
    // Profits {4, 1, 5/2} on unit point masses; every item fits alone.
    Instance inst = pointmass_instance({1, 1, 1}, {Rational(4), Rational(1), Rational(5, 2)},
                                       Rational(2), Rational(1, 4));
    auto [reduced, scaling] = reduce_profits(inst, Rational(1, 2), 17);
    REQUIRE(scaling.kept == std::vector<int>{1, 2, 0});  // profit-ascending
    CHECK(scaling.unit == Rational(2, 3));
    CHECK(scaling.weights == std::vector<Int>{1, 3, 6});
    CHECK(scaling.max_weight_bound == 6);
    REQUIRE(reduced.items.size() == 3);
    CHECK(reduced.items[2].profit == 6);
  }
  SUBCASE("equal profits all collapse to floor(n/eps)") {
    Instance inst = pointmass_instance({1, 1, 1}, {Rational(7), Rational(7), Rational(7)},
                                       Rational(2), Rational(1, 4));
    auto [reduced, scaling] = reduce_profits(inst, Rational(1, 2), 18);
    for (const auto& w : scaling.weights) CHECK(w == 6);
  }
  SUBCASE("single item") {
    Instance inst = pointmass_instance({1}, {Rational(9, 2)}, Rational(2), Rational(1, 4));
    auto [reduced, scaling] = reduce_profits(inst, Rational(1, 4), 19);
    REQUIRE(scaling.weights.size() == 1);
    CHECK(scaling.weights[0] == 4);  // floor(1/eps)
  }
  SUBCASE("no single item fits") {
    Instance inst = pointmass_instance({5}, {Rational(3)}, Rational(1), Rational(0));
    auto [reduced, scaling] = reduce_profits(inst, Rational(1, 4), 20);
    CHECK(reduced.items.empty());
    CHECK(scaling.kept.empty());
  }
}

TEST_CASE("bounded driver matches brute force on one item") {
  Instance inst = pointmass_instance({2}, {Rational(5)}, Rational(3), Rational(1, 4));
  Solution sol = solve_hyper_bounded(inst, Rational(1, 4), 23);
  CHECK(sol.selected == std::vector<int>{0});
  CHECK(sol.total_profit == 5);

  Instance blocked = pointmass_instance({4}, {Rational(5)}, Rational(3), Rational(1, 4));
  Solution none = solve_hyper_bounded(blocked, Rational(1, 4), 24);
  CHECK(none.selected.empty());
}

TEST_CASE("deterministic sizes reduce to classic knapsack") {
  for (int trial = 0; trial < 8; ++trial) {
    GenOptions options;
    options.family = "pointmass";
    options.n = 6 + trial % 4;
    options.seed = 7000 + trial;
    options.max_profit = 50;
    Instance inst = generate_instance(options);
    Solution sol = solve_hyper_bounded(inst, Rational(1, 4), 100 + trial);
    auto [opt_profit, opt_subset] = testutil::exact_opt(inst);
    CHECK(sol.total_profit == opt_profit);
    CHECK(testutil::exact_overflow(inst, sol.selected) == 0);
  }
}

TEST_CASE("solve_hyper spec examples") {
  SUBCASE("unit deterministic sizes pick the single best item") {
    Instance inst = pointmass_instance({1, 1}, {Rational(33, 10), Rational(11, 10)}, Rational(1),
                                       Rational(0));
    Solution sol = solve_hyper(inst, Rational(1, 10), 31);
    CHECK(sol.selected == std::vector<int>{0});
    CHECK(sol.total_profit == Rational(33, 10));
  }
  SUBCASE("budget one takes everything") {
    Instance inst;
    inst.items.push_back(Item{Gaussian{2, 0.2}, Rational(2)});
    inst.items.push_back(Item{Exponential{1.0}, Rational(3)});
    inst.capacity = 1;
    inst.overflow_budget = 1;
    Solution sol = solve_hyper(inst, Rational(1, 4), 32);
    CHECK(sol.selected == std::vector<int>{0, 1});
  }
}

TEST_CASE("replacing the low-variance tail barely moves the sum") {
  // Geometric variances keep every head ratio above eps^2/c^4 = 1/12, so the
  // critical index never fires before the cap L = 12 (c^4 = 3, eps = 1/2).
  const int n = 24, keep = 11;  // replace positions with 1-based index >= 12
  std::vector<Rational> vars;
  for (int i = 0; i < n; ++i) vars.push_back(pow_rational(Rational(1, 2), i));
  CHECK(critical_index(vars, Rational(1, 2), Rational(3)) == kNoCriticalIndex);
  CHECK(type_cap(3.0, Rational(1, 2)) == 12);

  const int m = 400'000;
  RngStream rng(787);
  std::vector<double> full(m, 0.0), replaced(m, 0.0);
  for (int i = 0; i < n; ++i) {
    double sd = std::sqrt(to_double(vars[static_cast<std::size_t>(i)]));
    std::normal_distribution<double> normal(1.0, sd);
    for (int s = 0; s < m; ++s) {
      double x = normal(rng.engine());
      full[s] += x;
      replaced[s] += (i < keep) ? x : 1.0;  // mean replacement
    }
  }
  double mc_error = 2 * std::sqrt(std::log(2.0 / 1e-6) / (2.0 * m));
  CHECK(empirical_cdf_distance(full, replaced) <= 1.0 / 16.0 + mc_error);
}

TEST_CASE("epsilon-epsilon contract on mixed instances") {
  for (int trial = 0; trial < 6; ++trial) {
    GenOptions options;
    options.family = "hyper";
    options.n = 6;
    options.seed = 8100 + trial;
    Instance inst = generate_instance(options);
    const Rational eps(1, 4);
    Solution sol = solve_hyper(inst, eps, 400 + trial);

    BruteForceConfig config;
    config.tau = 0.005;
    config.delta = 1e-4;
    config.seed = derive_seed(42, "brute", trial);
    BruteForceResult brute = brute_force_opt(inst, config);
    CHECK(sol.total_profit >= (1 - eps) * brute.profit);

    RngStream check(derive_seed(43, "check", trial));
    OverflowEstimate est = mc_overflow(distributions_of(inst, sol.selected), inst.capacity,
                                       0.005, 1e-4, check);
    CHECK(rational_from_double(est.point_estimate) <=
          inst.overflow_budget + eps + rational_from_double(0.01));
  }
}
