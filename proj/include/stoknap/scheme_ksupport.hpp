#ifndef STOKNAP_SCHEME_KSUPPORT_HPP
#define STOKNAP_SCHEME_KSUPPORT_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "stoknap/instance.hpp"
#include "stoknap/rational.hpp"
#include "stoknap/solver.hpp"

namespace stoknap {

/// Bucket address of an item: the argmax support coordinate of its true law
/// plus the interval index (out of s equal slices of [0,1]) of each rounded
/// coordinate probability. Items sharing a bucket are close enough
/// coordinate-wise for the moment-matching bound to apply.
struct BucketKey {
  int argmax_j = 0;            // 0-based support coordinate
  std::vector<int> intervals;  // 1-based interval per coordinate

  auto operator<=>(const BucketKey&) const = default;
};

struct KSupportPrep {
  std::vector<Rational> support;  // common support, sorted ascending
  long long s = 0;                // ceil(4 e k^3) interval count
  int w = 0;                      // moment matching order
  Rational grid;                  // eps/(4 n k)
  std::vector<std::vector<Rational>> probs;    // true probs, n x k, support order
  std::vector<std::vector<Rational>> rounded;  // rounded probs q, n x k
  std::vector<std::vector<Int>> counts;        // q = counts * grid
  std::map<BucketKey, std::vector<int>> buckets;
  std::vector<std::vector<int>> alphas;  // V_k(w), deterministic order
};

/// Number of moment indices |V_k(w)| = C(w + k, k).
Int moment_index_count(int k, int w);

/// All alpha in Z^k with alpha_i >= 0 and sum <= w, in lexicographic order.
std::vector<std::vector<int>> moment_indices(int k, int w);

/// Smallest w with 2^w >= 16 k s^k / eps (exact rational comparison).
int moment_matching_order(int k, long long s, const Rational& eps);

/// Rounds probabilities to the grid eps/(4nk) and assigns every item its
/// bucket. Throws when items do not share a common support.
KSupportPrep prepare_ksupport(const Instance& instance, const Rational& eps);

/// Exact rational sum over the subset of the alpha-monomials of the rounded
/// coordinate probabilities.
Rational moment_vector_entry(const std::vector<std::vector<Rational>>& rounded,
                             const std::vector<int>& subset, const std::vector<int>& alpha);

/// The (eps, 0) scheme for a common finite support: per-bucket reach tables
/// over quantized moment vectors, candidates combined in descending total
/// profit through the Monte Carlo gate.
Solution solve_ksupport(const Instance& instance, const Rational& epsilon, std::uint64_t seed,
                        const SolverConfig& config = {});

}  // namespace stoknap

#endif
