#include "stoknap/solver.hpp"

#include <stdexcept>

#include "stoknap/scheme_bernoulli.hpp"
#include "stoknap/scheme_hyper.hpp"
#include "stoknap/scheme_ksupport.hpp"

namespace stoknap {

Scheme scheme_from_name(const std::string& name) {
  if (name == "bernoulli") return Scheme::kBernoulli;
  if (name == "ksupport") return Scheme::kKSupport;
  if (name == "hyper") return Scheme::kHyper;
  if (name == "auto") return Scheme::kAuto;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kBernoulli: return "bernoulli";
    case Scheme::kKSupport: return "ksupport";
    case Scheme::kHyper: return "hyper";
    case Scheme::kAuto: return "auto";
  }
  return "auto";
}

Scheme pick_scheme(const Instance& instance, const SolverConfig& config) {
  if (all_bernoulli(instance)) return Scheme::kBernoulli;
  std::vector<Rational> support = common_support(instance);
  if (!support.empty() && static_cast<int>(support.size()) <= config.k_cap) {
    return Scheme::kKSupport;
  }
  return Scheme::kHyper;
}

Solution solve(const Instance& instance, Scheme scheme, const Rational& epsilon,
               std::uint64_t seed, const SolverConfig& config) {
  if (scheme == Scheme::kAuto) scheme = pick_scheme(instance, config);
  switch (scheme) {
    case Scheme::kBernoulli: return solve_bernoulli(instance, epsilon, seed, config);
    case Scheme::kKSupport: return solve_ksupport(instance, epsilon, seed, config);
    case Scheme::kHyper: return solve_hyper(instance, epsilon, seed, config);
    case Scheme::kAuto: break;
  }
  throw std::logic_error("unreachable scheme dispatch");
}

}  // namespace stoknap
