#include "stoknap/scheme_bernoulli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <stdexcept>

#include "stoknap/candidate_stream.hpp"
#include "stoknap/errors.hpp"
#include "stoknap/oracles.hpp"
#include "stoknap/pseudo_knapsack.hpp"

namespace stoknap {

namespace {

// Nearest grid multiple as a count, clamped into [0, max_count].
Int grid_count(const Rational& x, const Rational& grid, const Int& max_count) {
  Int c = floor_rational(x / grid + Rational(1, 2));
  if (c < 0) c = 0;
  if (c > max_count) c = max_count;
  return c;
}

}  // namespace

BernoulliInstance make_bernoulli_instance(const Instance& instance, const Rational& eps) {
  BernoulliInstance out;
  const auto n = static_cast<long long>(instance.items.size());
  if (n == 0) throw std::invalid_argument("bernoulli scheme: empty instance");
  out.eps = eps;
  out.grid = eps / Rational(4 * n);
  out.capacity = instance.capacity;
  out.budget = instance.overflow_budget;
  const Int max_count = floor_quotient(1, out.grid);
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    const auto* b = std::get_if<Bernoulli>(&instance.items[i].dist);
    if (!b) {
      throw std::invalid_argument("bernoulli scheme: item " + std::to_string(i) + " is " +
                                  family_name(instance.items[i].dist) + ", not bernoulli");
    }
    Int c = grid_count(b->p, out.grid, max_count);
    out.p.push_back(b->p);
    out.q_count.push_back(c);
    out.q.push_back(Rational(c) * out.grid);
    out.profits.push_back(instance.items[i].profit);
  }
  return out;
}

BucketPartition partition_buckets(const std::vector<Rational>& p, const Rational& eps) {
  BucketPartition buckets;
  const Rational low = eps / 100;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= low) {
      buckets.b1.push_back(static_cast<int>(i));
    } else if (p[i] >= 1 - low) {
      buckets.b2.push_back(static_cast<int>(i));
    } else if (p[i] <= Rational(1, 2)) {
      buckets.b3.push_back(static_cast<int>(i));
    } else {
      buckets.b4.push_back(static_cast<int>(i));
    }
  }
  return buckets;
}

int moment_count_t0(const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("moment_count_t0: eps must be in (0,1)");
  Rational eps4 = pow_rational(eps, 4);
  int t = 0;
  Rational power = 1;
  while (power * eps4 < 1) {
    power *= 2;
    ++t;
  }
  return t;
}

std::optional<SubsetCandidate> sk_bernoulli_large(const BernoulliInstance& inst, Gate& gate,
                                                  const SolverConfig& config) {
  const auto n = static_cast<long long>(inst.p.size());
  std::vector<DpItem> items;
  items.reserve(inst.p.size());
  for (std::size_t i = 0; i < inst.p.size(); ++i) {
    QuantizedVector size;
    size.coords = {inst.q_count[i], inst.q_count[i] * inst.q_count[i]};
    items.push_back(DpItem{std::move(size), inst.profits[i], static_cast<int>(i)});
  }
  // Coordinate values are capped at n, as multiples of eps/4n and (eps/4n)^2.
  std::vector<Int> caps = {floor_quotient(n, inst.grid),
                           floor_quotient(n, inst.grid * inst.grid)};
  ReachTable table = build_reach_table(items, caps, config.table_budget);
  for (std::size_t entry : enumerate_candidates(table)) {
    std::vector<int> subset = table.subset_ids(entry);
    if (gate.test(subset)) {
      return SubsetCandidate{std::move(subset), table.entries()[entry].best_profit};
    }
  }
  return std::nullopt;
}

std::optional<SubsetCandidate> sk_bernoulli_small(const BernoulliInstance& inst, Gate& gate,
                                                  const SolverConfig& config) {
  const auto n = static_cast<long long>(inst.p.size());
  const BucketPartition buckets = partition_buckets(inst.p, inst.eps);
  const int t0 = moment_count_t0(inst.eps);
  const Rational grid12 = inst.grid;                      // eps/(4n)
  const Rational grid34 = pow_rational(inst.eps, 4) / 1000;  // eps^4/1000
  const Int max12 = floor_quotient(1, grid12);
  const Int max34 = floor_quotient(1, grid34);
  const Rational moment_cap = 2 / (inst.eps * inst.eps);

  // Per-bucket DP items. Buckets near 0 carry their rounded mean; buckets
  // near 1 carry (count, complement) so the complement stays on the grid;
  // the central buckets carry the first t0 power sums.
  std::vector<DpItem> items1, items2, items3, items4;
  for (int i : buckets.b1) {
    QuantizedVector size;
    size.coords = {grid_count(inst.p[i], grid12, max12)};
    items1.push_back(DpItem{std::move(size), inst.profits[i], i});
  }
  for (int i : buckets.b2) {
    QuantizedVector size;
    size.coords = {Int(1), grid_count(1 - inst.p[i], grid12, max12)};
    items2.push_back(DpItem{std::move(size), inst.profits[i], i});
  }
  for (int i : buckets.b3) {
    Int c = grid_count(inst.p[i], grid34, max34);
    QuantizedVector size;
    Int power = 1;
    for (int j = 1; j <= t0; ++j) {
      power *= c;
      size.coords.push_back(power);
    }
    items3.push_back(DpItem{std::move(size), inst.profits[i], i});
  }
  for (int i : buckets.b4) {
    Int c = grid_count(1 - inst.p[i], grid34, max34);
    QuantizedVector size;
    size.coords.push_back(1);
    Int power = 1;
    for (int j = 1; j <= t0; ++j) {
      power *= c;
      size.coords.push_back(power);
    }
    items4.push_back(DpItem{std::move(size), inst.profits[i], i});
  }

  std::vector<Int> caps1 = {floor_quotient(n, grid12)};
  std::vector<Int> caps2 = {Int(n), floor_quotient(n, grid12)};
  std::vector<Int> caps3, caps4;
  caps4.push_back(Int(n));
  for (int j = 1; j <= t0; ++j) {
    Int cap = floor_quotient(moment_cap, pow_rational(grid34, j));
    caps3.push_back(cap);
    caps4.push_back(cap);
  }

  std::array<ReachTable, 4> tables = {
      build_reach_table(items1, caps1, config.table_budget),
      build_reach_table(items2, caps2, config.table_budget),
      build_reach_table(items3, caps3, config.table_budget),
      build_reach_table(items4, caps4, config.table_budget)};

  std::vector<std::vector<std::size_t>> orders;
  std::vector<std::vector<Rational>> profit_lists;
  for (const auto& table : tables) {
    std::vector<std::size_t> order = enumerate_candidates(table);
    std::vector<Rational> profits;
    profits.reserve(order.size());
    for (std::size_t e : order) profits.push_back(table.entries()[e].best_profit);
    orders.push_back(std::move(order));
    profit_lists.push_back(std::move(profits));
  }

  DescendingProduct product(profit_lists);
  std::size_t tried = 0;
  while (auto tuple = product.next()) {
    if (++tried > config.gate_budget) {
      throw BudgetError(
          "sk_bernoulli_small: cross-product budget exceeded; use a larger epsilon or fewer "
          "items");
    }
    std::vector<int> subset;
    Rational profit = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      std::size_t entry = orders[b][(*tuple)[b]];
      std::vector<int> part = tables[b].subset_ids(entry);
      subset.insert(subset.end(), part.begin(), part.end());
      profit += tables[b].entries()[entry].best_profit;
    }
    std::sort(subset.begin(), subset.end());
    if (gate.test(subset)) return SubsetCandidate{std::move(subset), std::move(profit)};
  }
  return std::nullopt;
}

Solution solve_bernoulli(const Instance& instance, const Rational& epsilon, std::uint64_t seed,
                         const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate(instance);
  if (epsilon <= 0 || epsilon >= 1) {
    throw std::invalid_argument("solve_bernoulli: epsilon must lie in (0,1)");
  }

  Solution solution;
  solution.scheme = "bernoulli";
  solution.epsilon = epsilon;
  solution.seed = seed;
  const Rational sub_eps = epsilon / 8;
  if (epsilon > Rational(1, 2)) {
    solution.warnings.push_back("epsilon above the analyzed range; guarantees degrade");
  }

  BernoulliInstance inst = make_bernoulli_instance(instance, sub_eps);
  std::vector<SizeDistribution> dists = distributions_of(instance);

  // One failure budget for the whole solve, split over a planned number of
  // two-stage gate evaluations.
  const std::size_t planned = 2 * config.gate_budget + 2;
  const double delta_each = config.delta_total / (2.0 * static_cast<double>(planned));

  Gate sub_gate(dists, instance.capacity, instance.overflow_budget + Rational(7, 2) * sub_eps,
                sub_eps / 2, delta_each, derive_seed(seed, "bernoulli-sub"));
  std::optional<SubsetCandidate> large = sk_bernoulli_large(inst, sub_gate, config);
  std::optional<SubsetCandidate> small = sk_bernoulli_small(inst, sub_gate, config);

  Gate final_gate(dists, instance.capacity,
                  instance.overflow_budget + Rational(3, 4) * epsilon, epsilon / 4, delta_each,
                  derive_seed(seed, "bernoulli-final"));
  std::optional<SubsetCandidate> best;
  for (const auto& candidate : {large, small}) {
    if (!candidate) continue;
    if (!final_gate.test(candidate->subset)) continue;
    if (!best || candidate->profit > best->profit ||
        (candidate->profit == best->profit &&
         std::lexicographical_compare(candidate->subset.begin(), candidate->subset.end(),
                                      best->subset.begin(), best->subset.end()))) {
      best = candidate;
    }
  }

  if (best) {
    solution.selected = best->subset;
    solution.total_profit = best->profit;
  } else {
    solution.warnings.push_back("no candidate passed the composition gate; returning empty set");
  }

  RngStream report(derive_seed(seed, "report"));
  solution.overflow = mc_overflow(distributions_of(instance, solution.selected),
                                  instance.capacity, to_double(epsilon / 8), instance.delta,
                                  report);
  solution.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return solution;
}

}  // namespace stoknap
