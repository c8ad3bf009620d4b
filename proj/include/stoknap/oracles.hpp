#ifndef STOKNAP_ORACLES_HPP
#define STOKNAP_ORACLES_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stoknap/distributions.hpp"
#include "stoknap/pmf.hpp"
#include "stoknap/rational.hpp"
#include "stoknap/rng.hpp"

namespace stoknap {

struct Instance;

/// Monte Carlo estimate of an overflow probability with a Hoeffding
/// confidence interval: with probability >= confidence the true value lies
/// within half_width of point_estimate.
struct OverflowEstimate {
  double point_estimate = 0;
  double half_width = 0;
  double confidence = 0;
  std::uint64_t samples_used = 0;
  std::uint64_t hits = 0;  // overflowing samples; point_estimate = hits / samples_used
};

/// Hoeffding sample count ceil(ln(2/delta) / (2 tau^2)).
std::uint64_t hoeffding_samples(double tau, double delta);

/// Estimates Pr[sum of items > capacity] to additive error tau with failure
/// probability delta. Discrete instances are summed in exact integer
/// arithmetic (after clearing denominators) so lattice sums falling exactly
/// on the capacity are never miscounted.
OverflowEstimate mc_overflow(std::span<const SizeDistribution> items, const Rational& capacity,
                             double tau, double delta, RngStream& rng);

/// The one-sided Monte Carlo comparison: estimates to within tau and returns
/// (estimate <= q), the comparison done exactly on the sample counts.
/// Guarantees (each with probability >= 1 - delta):
///   true  => Pr[sum > C] <= q + tau
///   Pr[sum > C] <= q - tau => true
bool leq_check(std::span<const SizeDistribution> items, const Rational& capacity,
               const Rational& q, const Rational& tau, double delta, RngStream& rng);

/// Exact law of the sum of independent Bernoulli/Finite items by iterated
/// rational convolution. Throws for continuous items or when an intermediate
/// law exceeds atom_cap atoms.
Pmf exact_sum_pmf(std::span<const SizeDistribution> items, std::size_t atom_cap = 10'000'000);

/// Total variation distance = half the l1 distance over the union grid.
Rational tv_distance_exact(const Pmf& a, const Pmf& b);
double tv_distance(const Pmf& a, const Pmf& b);

/// sup_t |F_a(t) - F_b(t)| over the union grid.
Rational cdf_distance_exact(const Pmf& a, const Pmf& b);
double cdf_distance(const Pmf& a, const Pmf& b);

/// sup_t |F_pmf(t) - Phi((t - mean)/sigma)|, evaluated at the jump points.
double cdf_distance_to_gaussian(const Pmf& pmf, double mean, double sigma);

/// Translated Poisson TP(mu, sigma2): Poi(mu - floor(mu - sigma2)) shifted by
/// floor(mu - sigma2), truncated so the omitted mass is at most tail_cut and
/// renormalized (flagged on the result).
Pmf translated_poisson_pmf(double mu, double sigma2, double tail_cut = 1e-12);
Pmf poisson_pmf(double lambda, double tail_cut = 1e-12);

/// Monte Carlo estimate of the Levy concentration function
/// Q(t) = sup_a Pr[a <= sum <= a + t], via a closed sliding window over
/// sorted samples.
double levy_concentration(std::span<const SizeDistribution> items, double t,
                          std::size_t samples, RngStream& rng);

struct BruteForceResult {
  std::vector<int> subset;   // lexicographically smallest among profit ties
  Rational profit = 0;
  bool feasible_found = false;
  bool exact = false;  // feasibility decided by exact convolution
};

struct BruteForceConfig {
  std::size_t max_items = 20;
  std::size_t atom_cap = 10'000'000;
  double tau = 0.01;    // Monte Carlo fallback accuracy
  double delta = 1e-6;  // per-subset failure probability
  std::uint64_t seed = 0;
  bool force_monte_carlo = false;
};

/// Enumerates all 2^n subsets and returns a maximum-profit member of Feas_p.
/// Uses exact convolution when every item is discrete, otherwise a Monte
/// Carlo estimate with common random numbers across subsets.
BruteForceResult brute_force_opt(const Instance& instance, const BruteForceConfig& config = {});

}  // namespace stoknap

#endif
