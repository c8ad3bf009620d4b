#ifndef STOKNAP_SCHEME_BERNOULLI_HPP
#define STOKNAP_SCHEME_BERNOULLI_HPP

#include <optional>
#include <vector>

#include "stoknap/gate.hpp"
#include "stoknap/instance.hpp"
#include "stoknap/rational.hpp"
#include "stoknap/solver.hpp"

namespace stoknap {

/// A Bernoulli-sized instance prepared for one sub-scheme run at error
/// parameter eps: true success probabilities p, their roundings q to the
/// grid eps/(4n) (as grid counts), profits, capacity and overflow budget.
struct BernoulliInstance {
  std::vector<Rational> p;
  std::vector<Rational> q;       // |q - p| <= eps/(8n), q in [0,1]
  std::vector<Int> q_count;      // q = q_count * eps/(4n)
  std::vector<Rational> profits;
  Rational capacity;
  Rational budget;  // overflow budget p of the instance
  Rational eps;
  Rational grid;  // eps/(4n)
};

BernoulliInstance make_bernoulli_instance(const Instance& instance, const Rational& eps);

/// Index partition by success probability: b1 = {p <= eps/100},
/// b2 = {p >= 1 - eps/100}, b3 = {eps/100 < p <= 1/2},
/// b4 = {1/2 < p < 1 - eps/100}; boundaries go to the lower-numbered bucket.
struct BucketPartition {
  std::vector<int> b1, b2, b3, b4;
};

BucketPartition partition_buckets(const std::vector<Rational>& p, const Rational& eps);

/// Smallest integer t with 2^t >= (1/eps)^4, i.e. ceil(4 log2(1/eps)).
int moment_count_t0(const Rational& eps);

struct SubsetCandidate {
  std::vector<int> subset;  // sorted instance indices
  Rational profit;
};

/// Matches first and second moments of the rounded instance over a
/// two-dimensional reach table and returns the best gated candidate.
/// Effective when the optimum's variance is large (>= 1/eps^2).
std::optional<SubsetCandidate> sk_bernoulli_large(const BernoulliInstance& inst, Gate& gate,
                                                  const SolverConfig& config = {});

/// Bucketed moment matching for the small-variance regime: per-bucket reach
/// tables (counts for near-deterministic buckets, first t0 power sums for
/// the central ones) combined in descending total profit through the gate.
std::optional<SubsetCandidate> sk_bernoulli_small(const BernoulliInstance& inst, Gate& gate,
                                                  const SolverConfig& config = {});

/// The full (eps, 0) solver: runs both sub-schemes at eps/8, re-checks both
/// outputs at the composition gate, and returns the best survivor.
Solution solve_bernoulli(const Instance& instance, const Rational& epsilon, std::uint64_t seed,
                         const SolverConfig& config = {});

}  // namespace stoknap

#endif
