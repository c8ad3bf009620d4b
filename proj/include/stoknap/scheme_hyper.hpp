#ifndef STOKNAP_SCHEME_HYPER_HPP
#define STOKNAP_SCHEME_HYPER_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "stoknap/gate.hpp"
#include "stoknap/instance.hpp"
#include "stoknap/rational.hpp"
#include "stoknap/solver.hpp"

namespace stoknap {

/// Sentinel for "no critical index exists".
inline constexpr std::size_t kNoCriticalIndex = std::numeric_limits<std::size_t>::max();

/// Smallest 1-based i with var[i-1] / sum_{j >= i} var[j] <= eps^2 / c4,
/// for variances sorted non-increasing; kNoCriticalIndex when none exists.
/// An all-zero tail (0/0) counts as ratio 0, so fully deterministic
/// sequences report index 1.
std::size_t critical_index(const std::vector<Rational>& variances_sorted, const Rational& eps,
                           const Rational& c4);

/// Variance-sorted prefix (largest first, ties by item index): the head
/// structure of a candidate set. T = prefix.size().
struct EpsilonType {
  std::vector<int> prefix;
};

/// Cap L on type length: ceil((c^4/eps^2) * log2(1/eps)); eps is clamped at
/// 2^-20 (the cap only limits enumeration length).
std::uint64_t type_cap(double c4, const Rational& eps);

/// All variance-consistent tuples of length <= min(L, n), in order of length
/// then position. Throws BudgetError (reporting the required count) when
/// more than `budget` types exist.
std::vector<EpsilonType> enumerate_types(const Instance& instance, const Rational& eps, double c,
                                         std::size_t budget);

struct ProfitScaling {
  std::vector<int> kept;             // original item indices, profit-ascending
  std::vector<Int> weights;          // integer profits of the kept items
  Rational unit;                     // K: original profit ~ weight * K
  Int max_weight_bound;              // M = ceil(n/eps)
};

/// The profit-rounding reduction: drops every item whose single-item
/// overflow already exceeds the budget (checked at slack eps/10), then
/// rescales profits to integers bounded by ceil(n/eps). Returns the reduced
/// instance (which may carry zero-weight items) and the scaling record; the
/// reduced instance is empty when no single item fits.
std::pair<Instance, ProfitScaling> reduce_profits(const Instance& instance, const Rational& eps,
                                                  std::uint64_t seed,
                                                  const SolverConfig& config = {});

/// The (eps, 0) driver for integer profits: enumerates types, runs the
/// large/small sub-scheme per type over a (profit, rounded-variance) reach
/// table, and returns the best candidate passing both the sub-scheme gate
/// and the driver gate.
Solution solve_hyper_bounded(const Instance& instance, const Rational& epsilon,
                             std::uint64_t seed, const SolverConfig& config = {});

/// The (eps, eps) solver: reduce_profits then solve_hyper_bounded.
Solution solve_hyper(const Instance& instance, const Rational& epsilon, std::uint64_t seed,
                     const SolverConfig& config = {});

namespace hyper_detail {

/// Per-instance variance order (variance descending, index ascending) and
/// the exact moment values the DP quantizes.
struct VarOrder {
  std::vector<Rational> var;
  std::vector<Rational> mean;
  std::vector<int> sorted;  // item indices in order
  std::vector<int> rank;    // rank[i] = position of item i
};

VarOrder make_var_order(const Instance& instance);

/// Window scales: the largest rho with n^2 rho / eps^2 <= pivot_var
/// (resp. n^4 rho / eps^4) staying within a factor two, i.e.
/// rho = pivot_var eps^2 / (2 n^2) and pivot_var eps^4 / (2 n^4).
Rational large_window_rho(const Rational& pivot_var, long long n, const Rational& eps);
Rational small_window_rho(const Rational& pivot_var, long long n, const Rational& eps);

/// One candidate surfaced by a sub-scheme: the subset, its integer profit,
/// and the rounded-variance window slot it came from (-1 for the bare
/// prefix candidate).
struct HyperCandidate {
  std::vector<int> subset;
  Int profit;
  Int window_slot;
};

/// Candidates of SK-hyper-large for one type of length exactly L, in the
/// order the window is scanned. Gate testing is left to the driver.
std::vector<HyperCandidate> large_type_candidates(const Instance& instance,
                                                  const VarOrder& order,
                                                  const EpsilonType& type, const Rational& eps,
                                                  const Rational& c4, const SolverConfig& config);

/// Candidates of SK-hyper-small for one type of length T < L.
std::vector<HyperCandidate> small_type_candidates(const Instance& instance,
                                                  const VarOrder& order,
                                                  const EpsilonType& type, const Rational& eps,
                                                  const Rational& c4, const SolverConfig& config);

}  // namespace hyper_detail

/// Lemma-style single-type runs (the driver composes these): gates the
/// type's candidates at "overflow <=_{eps/4} p + 3 eps/4" restricted to
/// target profit V and returns the first acceptance.
std::optional<std::vector<int>> sk_hyper_large(const Instance& instance, const EpsilonType& type,
                                               const Int& target_profit, const Rational& eps,
                                               Gate& gate, const SolverConfig& config = {});
std::optional<std::vector<int>> sk_hyper_small(const Instance& instance, const EpsilonType& type,
                                               const Int& target_profit, const Rational& eps,
                                               Gate& gate, const SolverConfig& config = {});

}  // namespace stoknap

#endif
