#include "stoknap/scheme_ksupport.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stoknap/candidate_stream.hpp"
#include "stoknap/errors.hpp"
#include "stoknap/gate.hpp"
#include "stoknap/oracles.hpp"
#include "stoknap/pseudo_knapsack.hpp"

namespace stoknap {

Int moment_index_count(int k, int w) {
  Int c = 1;
  for (int i = 1; i <= k; ++i) c = c * (w + i) / i;
  return c;
}

std::vector<std::vector<int>> moment_indices(int k, int w) {
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(k, 0);
  // Lexicographic enumeration of all vectors with sum <= w.
  while (true) {
    out.push_back(alpha);
    int j = k - 1;
    while (j >= 0) {
      ++alpha[j];
      int sum = 0;
      for (int v : alpha) sum += v;
      if (sum <= w) break;
      alpha[j] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return out;
}

int moment_matching_order(int k, long long s, const Rational& eps) {
  Rational target = Rational(16) * k;
  for (int j = 0; j < k; ++j) target *= s;
  int w = 0;
  Rational power = 1;
  while (power * eps < target) {
    power *= 2;
    ++w;
  }
  return w;
}

namespace {

long long interval_count(int k) {
  return static_cast<long long>(std::ceil(4.0 * std::numbers::e * k * k * k));
}

}  // namespace

KSupportPrep prepare_ksupport(const Instance& instance, const Rational& eps) {
  KSupportPrep prep;
  prep.support = common_support(instance);
  if (prep.support.empty()) {
    throw std::invalid_argument("ksupport scheme: items do not share a common finite support");
  }
  const int k = static_cast<int>(prep.support.size());
  const auto n = static_cast<long long>(instance.items.size());
  prep.s = interval_count(k);
  prep.w = moment_matching_order(k, prep.s, eps);
  prep.grid = eps / Rational(4 * n * k);
  prep.alphas = moment_indices(k, prep.w);
  const Int max_count = floor_quotient(1, prep.grid);

  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    // Coordinate probabilities in sorted-support order.
    std::vector<Rational> p(k, Rational(0));
    for (const auto& [value, prob] : exact_atoms(instance.items[i].dist)) {
      auto it = std::lower_bound(prep.support.begin(), prep.support.end(), value);
      p[static_cast<int>(it - prep.support.begin())] = prob;
    }
    BucketKey bucket;
    // Argmax coordinate of the true law, lowest index on ties.
    for (int j = 1; j < k; ++j) {
      if (p[j] > p[bucket.argmax_j]) bucket.argmax_j = j;
    }
    std::vector<Rational> q(k);
    std::vector<Int> counts(k);
    for (int j = 0; j < k; ++j) {
      Int c = floor_rational(p[j] / prep.grid + Rational(1, 2));
      if (c < 0) c = 0;
      if (c > max_count) c = max_count;
      counts[j] = c;
      q[j] = Rational(c) * prep.grid;
      // Interval index of q[j]: slice ((t-1)/s, t/s], boundaries to the
      // lower interval, q = 0 pinned to the first slice.
      Int t = ceil_rational(q[j] * prep.s);
      if (t < 1) t = 1;
      bucket.intervals.push_back(static_cast<int>(t));
    }
    prep.probs.push_back(std::move(p));
    prep.rounded.push_back(std::move(q));
    prep.counts.push_back(std::move(counts));
    prep.buckets[bucket].push_back(static_cast<int>(i));
  }
  return prep;
}

Rational moment_vector_entry(const std::vector<std::vector<Rational>>& rounded,
                             const std::vector<int>& subset, const std::vector<int>& alpha) {
  Rational total = 0;
  for (int idx : subset) {
    Rational term = 1;
    const auto& q = rounded.at(idx);
    for (std::size_t j = 0; j < alpha.size(); ++j) term *= pow_rational(q[j], alpha[j]);
    total += term;
  }
  return total;
}

Solution solve_ksupport(const Instance& instance, const Rational& epsilon, std::uint64_t seed,
                        const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate(instance);
  if (epsilon <= 0 || epsilon >= 1) {
    throw std::invalid_argument("solve_ksupport: epsilon must lie in (0,1)");
  }
  KSupportPrep prep = prepare_ksupport(instance, epsilon);
  const int k = static_cast<int>(prep.support.size());
  if (k > config.k_cap) {
    throw BudgetError("solve_ksupport: support size " + std::to_string(k) +
                      " exceeds the configured cap " + std::to_string(config.k_cap) +
                      "; use the hyper scheme instead");
  }

  Solution solution;
  solution.scheme = "ksupport";
  solution.epsilon = epsilon;
  solution.seed = seed;

  // One DP item per instance item: coordinates are the alpha-monomials of
  // the rounded probabilities, as integer multiples of grid^{|alpha|}.
  std::vector<ReachTable> tables;
  std::vector<std::vector<std::size_t>> orders;
  std::vector<std::vector<Rational>> profit_lists;
  for (const auto& [bucket, members] : prep.buckets) {
    std::vector<DpItem> items;
    items.reserve(members.size());
    for (int idx : members) {
      QuantizedVector size;
      size.coords.reserve(prep.alphas.size());
      for (const auto& alpha : prep.alphas) {
        Int coord = 1;
        for (int j = 0; j < k; ++j) {
          for (int e = 0; e < alpha[j]; ++e) coord *= prep.counts[idx][j];
        }
        size.coords.push_back(std::move(coord));
      }
      items.push_back(DpItem{std::move(size), instance.items[idx].profit, idx});
    }
    ReachTable table = build_reach_table(items, {}, config.table_budget);
    std::vector<std::size_t> order = enumerate_candidates(table);
    std::vector<Rational> profits;
    profits.reserve(order.size());
    for (std::size_t e : order) profits.push_back(table.entries()[e].best_profit);
    tables.push_back(std::move(table));
    orders.push_back(std::move(order));
    profit_lists.push_back(std::move(profits));
  }

  const std::size_t planned = config.gate_budget + 1;
  const double delta_each = config.delta_total / (2.0 * static_cast<double>(planned));
  Gate gate(distributions_of(instance), instance.capacity,
            instance.overflow_budget + Rational(3, 4) * epsilon, epsilon / 4, delta_each,
            derive_seed(seed, "ksupport-gate"));

  std::optional<std::vector<int>> best;
  Rational best_profit = 0;
  DescendingProduct product(profit_lists);
  std::size_t tried = 0;
  while (auto tuple = product.next()) {
    if (++tried > config.gate_budget) {
      throw BudgetError("solve_ksupport: candidate budget exceeded; use a larger epsilon, a "
                        "smaller support, or fewer items");
    }
    std::vector<int> subset;
    Rational profit = 0;
    for (std::size_t b = 0; b < tables.size(); ++b) {
      std::size_t entry = orders[b][(*tuple)[b]];
      std::vector<int> part = tables[b].subset_ids(entry);
      subset.insert(subset.end(), part.begin(), part.end());
      profit += tables[b].entries()[entry].best_profit;
    }
    std::sort(subset.begin(), subset.end());
    if (gate.test(subset)) {
      best = std::move(subset);
      best_profit = profit;
      break;
    }
  }

  if (best) {
    solution.selected = *best;
    solution.total_profit = best_profit;
  } else {
    solution.warnings.push_back("no candidate passed the gate; returning empty set");
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
