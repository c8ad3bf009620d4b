#ifndef STOKNAP_DISTRIBUTIONS_HPP
#define STOKNAP_DISTRIBUTIONS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stoknap/pmf.hpp"
#include "stoknap/rational.hpp"
#include "stoknap/rng.hpp"

namespace stoknap {

// Item-size probability laws. Discrete laws carry exact rational parameters
// (the dynamic programs quantize them); continuous families carry double
// parameters. All types are immutable value types, safe to share across
// threads.

struct Bernoulli {
  Rational p;
};

struct Finite {
  std::vector<Rational> support;  // distinct values
  std::vector<Rational> probs;    // same length, sums to 1 exactly
};

struct Gaussian {
  double mean = 0;
  double var = 1;
};

struct Poisson {
  double lambda = 1;
};

struct Exponential {
  double rate = 1;
};

struct Laplace {
  double location = 0;
  double scale = 1;
};

struct Uniform {
  double a = 0;
  double b = 1;
};

struct BetaLaw {
  double alpha = 1;
  double beta = 1;
};

struct GammaLaw {
  double shape = 1;  // k
  double scale = 1;  // theta
};

struct MaxwellBoltzmann {
  double scale = 1;  // sigma
};

using SizeDistribution =
    std::variant<Bernoulli, Finite, Gaussian, Poisson, Exponential, Laplace,
                 Uniform, BetaLaw, GammaLaw, MaxwellBoltzmann>;

/// Mean, variance, fourth central moment, and kurtosis = mu4 / var^2.
/// Kurtosis is left unset for point masses (0/0 is declared undefined, not 0).
struct MomentSummary {
  double mean = 0;
  double var = 0;
  double mu4 = 0;
  std::optional<double> kurtosis;
};

/// Throws std::invalid_argument when the parameters violate the family's
/// invariants (probabilities outside [0,1], finite probs not summing to 1,
/// non-positive variance parameters, ...).
void validate(const SizeDistribution& dist);

std::string family_name(const SizeDistribution& dist);

/// Closed-form moments. Finite laws are evaluated by exact weighted sums;
/// parametric families go through their raw moments so that the Appendix-style
/// kurtosis table stays an independent cross-check.
MomentSummary moments(const SizeDistribution& dist);

/// Exact mean/variance as rationals: exact for Bernoulli/Finite, the exact
/// binary value of the closed-form double otherwise. The hyper scheme keys
/// its DP off these, so they must be deterministic and totally ordered.
Rational mean_rational(const SizeDistribution& dist);
Rational var_rational(const SizeDistribution& dist);

/// Smallest uniform (c,2,4)-hypercontractivity constant for the batch:
/// c = (max kurtosis)^{1/4}. Throws when some item has zero variance,
/// naming the item.
double hyper_constant(std::span<const SizeDistribution> dists);

/// One draw. Deterministic for a fixed stream state and draw index.
double sample(const SizeDistribution& dist, RngStream& rng);

/// Pre-compiles the sampling path for hot Monte Carlo loops.
std::function<double(RngStream&)> make_sampler(const SizeDistribution& dist);

bool is_discrete_exact(const SizeDistribution& dist);  // Bernoulli or Finite
bool is_point_mass(const SizeDistribution& dist);
bool may_be_negative(const SizeDistribution& dist);

/// Atoms of a Bernoulli/Finite law with positive probability, sorted by
/// value. Throws for continuous families.
std::vector<std::pair<Rational, Rational>> exact_atoms(const SizeDistribution& dist);

/// The law itself as an exact pmf; throws for continuous families.
Pmf exact_pmf(const SizeDistribution& dist);

nlohmann::json dist_to_json(const SizeDistribution& dist);
SizeDistribution dist_from_json(const nlohmann::json& j);

}  // namespace stoknap

#endif
