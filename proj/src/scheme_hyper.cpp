#include "stoknap/scheme_hyper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "stoknap/errors.hpp"
#include "stoknap/oracles.hpp"
#include "stoknap/pseudo_knapsack.hpp"

namespace stoknap {

std::size_t critical_index(const std::vector<Rational>& variances_sorted, const Rational& eps,
                           const Rational& c4) {
  if (eps <= 0 || c4 <= 0) throw std::invalid_argument("critical_index: eps and c4 must be positive");
  Rational tail = 0;
  for (const auto& v : variances_sorted) {
    if (v < 0) throw std::invalid_argument("critical_index: negative variance");
    tail += v;
  }
  const Rational threshold = eps * eps / c4;
  for (std::size_t i = 0; i < variances_sorted.size(); ++i) {
    // 0/0 counts as 0: a fully deterministic tail is critical immediately.
    if (tail == 0 || variances_sorted[i] <= threshold * tail) return i + 1;
    tail -= variances_sorted[i];
  }
  return kNoCriticalIndex;
}

std::uint64_t type_cap(double c4, const Rational& eps) {
  double e = to_double(eps);
  if (e >= 1.0) return 0;  // degenerate: only the empty type survives
  e = std::max(e, 0x1.0p-20);  // keeps the cap finite; only the length cap is affected
  double cap = std::ceil(c4 / (e * e) * std::log2(1.0 / e));
  return cap < 0.0 ? 0 : static_cast<std::uint64_t>(cap);
}

namespace hyper_detail {

Rational large_window_rho(const Rational& pivot_var, long long n, const Rational& eps) {
  // n^2 rho / eps^2 <= pivot_var <= 2 n^2 rho / eps^2.
  return pivot_var * eps * eps / (2 * n * n);
}

Rational small_window_rho(const Rational& pivot_var, long long n, const Rational& eps) {
  // n^4 rho / eps^4 <= pivot_var <= 2 n^4 rho / eps^4.
  return pivot_var * pow_rational(eps, 4) / (Rational(2) * n * n * n * n);
}

VarOrder make_var_order(const Instance& instance) {
  VarOrder order;
  const std::size_t n = instance.items.size();
  order.var.reserve(n);
  order.mean.reserve(n);
  for (const auto& item : instance.items) {
    order.var.push_back(var_rational(item.dist));
    order.mean.push_back(mean_rational(item.dist));
  }
  order.sorted.resize(n);
  for (std::size_t i = 0; i < n; ++i) order.sorted[i] = static_cast<int>(i);
  std::sort(order.sorted.begin(), order.sorted.end(), [&order](int a, int b) {
    if (order.var[a] != order.var[b]) return order.var[a] > order.var[b];
    return a < b;
  });
  order.rank.resize(n);
  for (std::size_t pos = 0; pos < n; ++pos) order.rank[order.sorted[pos]] = static_cast<int>(pos);
  return order;
}

namespace {

Int integer_profit(const Rational& profit) {
  if (denominator(profit) != 1 || profit < 0) {
    throw std::invalid_argument("hyper driver: profits must be non-negative integers");
  }
  return numerator(profit);
}

struct TypeGeometry {
  std::vector<int> fixed;  // prefix items re-attached to every candidate
  int pivot = -1;          // item whose variance scales rho
  std::vector<int> gamma;  // DP item pool
  bool pivot_in_gamma = false;
};

TypeGeometry type_geometry(const VarOrder& order, const EpsilonType& type, bool large) {
  TypeGeometry g;
  const std::size_t t = type.prefix.size();
  if (t == 0) return g;
  // The large case fixes j_1..j_{L-1} and scans below j_{L-1}; the small case
  // fixes j_1..j_{T-1} and scans from j_T (inclusive) down. With a length-1
  // type both collapse to "scan from j_1".
  std::size_t fixed_len = large && t >= 2 ? t - 1 : (t >= 1 ? t - 1 : 0);
  g.fixed.assign(type.prefix.begin(), type.prefix.begin() + fixed_len);
  g.pivot = large && t >= 2 ? type.prefix[t - 2] : type.prefix[t - 1];
  g.pivot_in_gamma = !(large && t >= 2);
  const int pivot_rank = order.rank[g.pivot];
  for (int pos = 0; pos < static_cast<int>(order.sorted.size()); ++pos) {
    int item = order.sorted[pos];
    if (pos > pivot_rank || (g.pivot_in_gamma && pos == pivot_rank)) g.gamma.push_back(item);
  }
  return g;
}

// Builds candidates from the (integer profit, rounded variance) reach table
// over gamma, admitting window slots in [slot_lo, slot_hi], plus the bare
// prefix itself (slot -1).
std::vector<HyperCandidate> window_candidates(const Instance& instance, const VarOrder& order,
                                              const TypeGeometry& g, const Rational& rho,
                                              const Rational& slot_lo, const Rational& slot_hi,
                                              const SolverConfig& config) {
  std::vector<HyperCandidate> out;
  Int fixed_profit = 0;
  for (int idx : g.fixed) fixed_profit += integer_profit(instance.items[idx].profit);

  HyperCandidate bare;
  bare.subset = g.fixed;
  if (g.pivot >= 0 && g.pivot_in_gamma) bare.subset.push_back(g.pivot);
  std::sort(bare.subset.begin(), bare.subset.end());
  bare.profit = fixed_profit;
  if (g.pivot >= 0 && g.pivot_in_gamma) bare.profit += integer_profit(instance.items[g.pivot].profit);
  bare.window_slot = -1;
  out.push_back(std::move(bare));

  if (g.gamma.empty()) return out;

  const bool degenerate = rho == 0;  // deterministic pool: no variance dimension
  std::vector<DpItem> items;
  items.reserve(g.gamma.size());
  for (int idx : g.gamma) {
    QuantizedVector size;
    size.coords.push_back(integer_profit(instance.items[idx].profit));
    size.coords.push_back(degenerate ? Int(0) : floor_quotient(order.var[idx], rho));
    items.push_back(DpItem{std::move(size), -order.mean[idx], idx});
  }
  std::vector<Int> caps;
  if (!degenerate && slot_hi >= 0) {
    Int profit_cap = fixed_profit;
    for (int idx : g.gamma) profit_cap += integer_profit(instance.items[idx].profit);
    caps = {profit_cap, floor_rational(slot_hi)};
  }
  ReachTable table = build_reach_table(items, caps, config.table_budget);

  for (std::size_t e : enumerate_candidates(table)) {
    const auto& entry = table.entries()[e];
    const Int& slot = entry.key.coords[1];
    if (!degenerate) {
      if (Rational(slot) < slot_lo || Rational(slot) > slot_hi) continue;
    }
    HyperCandidate cand;
    cand.subset = table.subset_ids(e);
    cand.subset.insert(cand.subset.end(), g.fixed.begin(), g.fixed.end());
    std::sort(cand.subset.begin(), cand.subset.end());
    cand.profit = fixed_profit + entry.key.coords[0];
    cand.window_slot = slot;
    out.push_back(std::move(cand));
    if (out.size() > config.gate_budget) {
      throw BudgetError("hyper scheme: candidate budget exceeded; raise epsilon or shrink n");
    }
  }
  return out;
}

}  // namespace

std::vector<HyperCandidate> large_type_candidates(const Instance& instance, const VarOrder& order,
                                                  const EpsilonType& type, const Rational& eps,
                                                  const Rational& c4, const SolverConfig& config) {
  const auto n = static_cast<long long>(instance.items.size());
  TypeGeometry g = type_geometry(order, type, /*large=*/true);
  if (type.prefix.empty()) {
    return {HyperCandidate{{}, Int(0), Int(-1)}};
  }
  const Rational pivot_var = order.var[g.pivot];
  const Rational rho = large_window_rho(pivot_var, n, eps);
  const Rational slot_hi = rho == 0 ? Rational(-1) : Rational(2) * c4 * n * n / pow_rational(eps, 4);
  return window_candidates(instance, order, g, rho, Rational(0), slot_hi, config);
}

std::vector<HyperCandidate> small_type_candidates(const Instance& instance, const VarOrder& order,
                                                  const EpsilonType& type, const Rational& eps,
                                                  const Rational& c4, const SolverConfig& config) {
  const auto n = static_cast<long long>(instance.items.size());
  TypeGeometry g = type_geometry(order, type, /*large=*/false);
  if (type.prefix.empty()) {
    return {HyperCandidate{{}, Int(0), Int(-1)}};
  }
  const Rational pivot_var = order.var[g.pivot];
  const Rational n4 = Rational(n) * n * n * n;
  const Rational rho = small_window_rho(pivot_var, n, eps);
  const Rational slot_lo = c4 * n4 / pow_rational(eps, 6) - n;
  const Rational slot_hi = rho == 0 ? Rational(-1) : 2 * n4 * n / pow_rational(eps, 4);
  return window_candidates(instance, order, g, rho, slot_lo, slot_hi, config);
}

}  // namespace hyper_detail

std::vector<EpsilonType> enumerate_types(const Instance& instance, const Rational& eps, double c,
                                         std::size_t budget) {
  using hyper_detail::make_var_order;
  const std::size_t n = instance.items.size();
  const std::uint64_t cap = type_cap(c * c * c * c, eps);
  const std::size_t t_max = std::min<std::uint64_t>(cap, n);

  Int count = 0;
  {
    Int binom = 1;  // C(n, 0)
    for (std::size_t t = 0; t <= t_max; ++t) {
      count += binom;
      binom = binom * static_cast<long long>(n - t) / static_cast<long long>(t + 1);
    }
  }
  if (count > Int(static_cast<std::uint64_t>(budget))) {
    throw BudgetError("enumerate_types: " + count.str() + " types exceed the budget of " +
                      std::to_string(budget));
  }

  hyper_detail::VarOrder order = make_var_order(instance);
  std::vector<EpsilonType> types;
  types.reserve(count.convert_to<std::size_t>());
  // Tuples of length t are combinations of positions in the variance order;
  // positional enumeration makes every tuple variance-consistent by
  // construction.
  for (std::size_t t = 0; t <= t_max; ++t) {
    std::vector<int> positions(t);
    for (std::size_t i = 0; i < t; ++i) positions[i] = static_cast<int>(i);
    while (true) {
      EpsilonType type;
      type.prefix.reserve(t);
      for (int pos : positions) type.prefix.push_back(order.sorted[pos]);
      types.push_back(std::move(type));
      if (t == 0) break;
      int j = static_cast<int>(t) - 1;
      while (j >= 0 && positions[j] == static_cast<int>(n - t + j)) --j;
      if (j < 0) break;
      ++positions[j];
      for (std::size_t i = j + 1; i < t; ++i) positions[i] = positions[i - 1] + 1;
    }
  }
  return types;
}

namespace {

Rational effective_c4(const Instance& instance, const SolverConfig& config,
                      std::vector<std::string>* warnings) {
  if (config.c_override) {
    double c = *config.c_override;
    return rational_from_double(c * c * c * c);
  }
  double worst = 1.0;
  bool any_positive = false;
  for (const auto& item : instance.items) {
    MomentSummary m = moments(item.dist);
    if (m.kurtosis) {
      worst = std::max(worst, *m.kurtosis);
      any_positive = true;
    }
  }
  if (!any_positive && warnings) {
    warnings->push_back("all item variances are zero; hypercontractivity constant defaults to 1");
  }
  return rational_from_double(worst);
}

struct FlatCandidate {
  Int profit;
  std::size_t type_index;
  Int window_slot;
  std::vector<int> subset;
};

// Candidate order: profit descending, then type enumeration order, then
// window slot, then subset; reproduces "for V descending, for each type,
// for each window target" with one early-exit pass.
bool candidate_before(const FlatCandidate& a, const FlatCandidate& b) {
  if (a.profit != b.profit) return a.profit > b.profit;
  if (a.type_index != b.type_index) return a.type_index < b.type_index;
  if (a.window_slot != b.window_slot) return a.window_slot < b.window_slot;
  return a.subset < b.subset;
}

}  // namespace

std::optional<std::vector<int>> sk_hyper_large(const Instance& instance, const EpsilonType& type,
                                               const Int& target_profit, const Rational& eps,
                                               Gate& gate, const SolverConfig& config) {
  hyper_detail::VarOrder order = hyper_detail::make_var_order(instance);
  Rational c4 = effective_c4(instance, config, nullptr);
  auto candidates = hyper_detail::large_type_candidates(instance, order, type, eps, c4, config);
  for (const auto& cand : candidates) {
    if (cand.profit != target_profit) continue;
    if (gate.test(cand.subset)) return cand.subset;
  }
  return std::nullopt;
}

std::optional<std::vector<int>> sk_hyper_small(const Instance& instance, const EpsilonType& type,
                                               const Int& target_profit, const Rational& eps,
                                               Gate& gate, const SolverConfig& config) {
  hyper_detail::VarOrder order = hyper_detail::make_var_order(instance);
  Rational c4 = effective_c4(instance, config, nullptr);
  auto candidates = hyper_detail::small_type_candidates(instance, order, type, eps, c4, config);
  for (const auto& cand : candidates) {
    if (cand.profit != target_profit) continue;
    if (gate.test(cand.subset)) return cand.subset;
  }
  return std::nullopt;
}

std::pair<Instance, ProfitScaling> reduce_profits(const Instance& instance, const Rational& eps,
                                                  std::uint64_t seed, const SolverConfig& config) {
  validate(instance);
  const auto n = static_cast<long long>(instance.items.size());
  ProfitScaling scaling;
  scaling.max_weight_bound = ceil_rational(Rational(n) / eps);

  // Profit-ascending order, stable in the original index.
  std::vector<int> by_profit(instance.items.size());
  for (std::size_t i = 0; i < by_profit.size(); ++i) by_profit[i] = static_cast<int>(i);
  std::sort(by_profit.begin(), by_profit.end(), [&instance](int a, int b) {
    if (instance.items[a].profit != instance.items[b].profit) {
      return instance.items[a].profit < instance.items[b].profit;
    }
    return a < b;
  });

  // The highest-profit item that fits on its own (checked at slack eps/10).
  const double delta_each = config.delta_total / (2.0 * static_cast<double>(n) + 2.0);
  std::ptrdiff_t cutoff = -1;
  for (std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(by_profit.size()) - 1; pos >= 0; --pos) {
    int idx = by_profit[pos];
    RngStream stream(derive_seed(seed, "reduce-item", static_cast<std::uint64_t>(idx)));
    std::vector<SizeDistribution> single = {instance.items[idx].dist};
    if (leq_check(single, instance.capacity, instance.overflow_budget, eps / 10, delta_each,
                  stream)) {
      cutoff = pos;
      break;
    }
  }

  Instance reduced;
  reduced.capacity = instance.capacity;
  reduced.overflow_budget = instance.overflow_budget;
  reduced.epsilon = instance.epsilon;
  reduced.seed = instance.seed;
  reduced.delta = instance.delta;
  if (cutoff < 0) return {reduced, scaling};  // nothing fits: OPT is the empty set

  const Rational anchor = instance.items[by_profit[cutoff]].profit;
  scaling.unit = eps * anchor / n;
  for (std::ptrdiff_t pos = 0; pos <= cutoff; ++pos) {
    int idx = by_profit[pos];
    Int w = floor_quotient(instance.items[idx].profit, scaling.unit);
    scaling.kept.push_back(idx);
    scaling.weights.push_back(w);
    reduced.items.push_back(Item{instance.items[idx].dist, Rational(w)});
  }
  return {reduced, scaling};
}

Solution solve_hyper_bounded(const Instance& instance, const Rational& epsilon,
                             std::uint64_t seed, const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (epsilon <= 0 || epsilon >= 1) {
    throw std::invalid_argument("solve_hyper_bounded: epsilon must lie in (0,1)");
  }
  Solution solution;
  solution.scheme = "hyper";
  solution.epsilon = epsilon;
  solution.seed = seed;

  const Rational delta = epsilon / 8;
  Rational c4 = effective_c4(instance, config, &solution.warnings);
  const double c = std::pow(to_double(c4), 0.25);
  const std::uint64_t cap = type_cap(to_double(c4), delta);

  std::vector<EpsilonType> types = enumerate_types(instance, delta, c, config.type_budget);
  hyper_detail::VarOrder order = hyper_detail::make_var_order(instance);

  std::vector<FlatCandidate> candidates;
  for (std::size_t t = 0; t < types.size(); ++t) {
    auto type_candidates =
        types[t].prefix.size() == cap
            ? hyper_detail::large_type_candidates(instance, order, types[t], delta, c4, config)
            : hyper_detail::small_type_candidates(instance, order, types[t], delta, c4, config);
    for (auto& cand : type_candidates) {
      candidates.push_back(
          FlatCandidate{std::move(cand.profit), t, std::move(cand.window_slot),
                        std::move(cand.subset)});
      if (candidates.size() > config.gate_budget) {
        throw BudgetError("solve_hyper_bounded: candidate budget exceeded");
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), candidate_before);

  const std::size_t planned = candidates.size() + 1;
  const double delta_each = config.delta_total / (4.0 * static_cast<double>(planned));
  std::vector<SizeDistribution> dists = distributions_of(instance);
  Gate inner(dists, instance.capacity, instance.overflow_budget + Rational(3, 4) * delta,
             delta / 4, delta_each, derive_seed(seed, "hyper-inner"));
  Gate outer(dists, instance.capacity, instance.overflow_budget + 6 * delta, 2 * delta,
             delta_each, derive_seed(seed, "hyper-outer"));

  for (const auto& cand : candidates) {
    if (!inner.test(cand.subset)) continue;
    if (!outer.test(cand.subset)) continue;
    solution.selected = cand.subset;
    solution.total_profit = profit_of(instance, cand.subset);
    break;
  }

  RngStream report(derive_seed(seed, "report"));
  solution.overflow = mc_overflow(distributions_of(instance, solution.selected),
                                  instance.capacity, to_double(epsilon / 8), instance.delta,
                                  report);
  solution.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return solution;
}

Solution solve_hyper(const Instance& instance, const Rational& epsilon, std::uint64_t seed,
                     const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate(instance);
  if (epsilon <= 0 || epsilon >= 1) {
    throw std::invalid_argument("solve_hyper: epsilon must lie in (0,1)");
  }
  Solution solution;
  solution.scheme = "hyper";
  solution.epsilon = epsilon;
  solution.seed = seed;
  for (const auto& item : instance.items) {
    if (may_be_negative(item.dist)) {
      solution.warnings.push_back(
          "an item size may take negative values; the capacity guarantee still holds");
      break;
    }
  }

  auto [reduced, scaling] = reduce_profits(instance, epsilon, derive_seed(seed, "reduce"), config);
  if (!reduced.items.empty()) {
    Solution inner = solve_hyper_bounded(reduced, epsilon, derive_seed(seed, "bounded"), config);
    for (const auto& warning : inner.warnings) solution.warnings.push_back(warning);
    for (int reduced_idx : inner.selected) solution.selected.push_back(scaling.kept[reduced_idx]);
    std::sort(solution.selected.begin(), solution.selected.end());
    solution.total_profit = profit_of(instance, solution.selected);
  } else {
    solution.warnings.push_back("no single item satisfies the overflow budget; returning empty set");
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
