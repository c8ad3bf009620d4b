#ifndef STOKNAP_PMF_HPP
#define STOKNAP_PMF_HPP

#include <utility>
#include <vector>

#include <json.hpp>

#include "stoknap/rational.hpp"

namespace stoknap {

/// Exact probability mass function: (value, probability) atoms with strictly
/// increasing values and probabilities summing to exactly 1. `renormalized`
/// marks laws that were truncated (translated Poisson tails) and rescaled
/// back to total mass 1.
struct Pmf {
  std::vector<std::pair<Rational, Rational>> atoms;
  bool renormalized = false;

  bool operator==(const Pmf& other) const { return atoms == other.atoms; }
};

/// Builds a Pmf from unsorted, possibly duplicated atoms; throws unless the
/// probabilities sum to exactly 1.
Pmf make_pmf(std::vector<std::pair<Rational, Rational>> atoms);

/// Law of X + Y for independent X, Y. Throws when the result would exceed
/// `atom_cap` atoms.
Pmf convolve(const Pmf& a, const Pmf& b, std::size_t atom_cap);

/// Pr[X > t], exact.
Rational tail_prob(const Pmf& pmf, const Rational& t);

/// Pr[X <= t], exact.
Rational cdf_at(const Pmf& pmf, const Rational& t);

nlohmann::json pmf_to_json(const Pmf& pmf);
Pmf pmf_from_json(const nlohmann::json& j);

}  // namespace stoknap

#endif
