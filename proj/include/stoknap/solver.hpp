#ifndef STOKNAP_SOLVER_HPP
#define STOKNAP_SOLVER_HPP

#include <cstdint>
#include <optional>

#include "stoknap/instance.hpp"
#include "stoknap/rational.hpp"

namespace stoknap {

/// Resource and accuracy knobs shared by the three schemes. The defaults
/// match the documented file-format defaults; budgets turn runaway
/// enumerations into BudgetError instead of memory exhaustion.
struct SolverConfig {
  double delta_total = 1e-6;         // failure budget for one solve, split across gates
  std::size_t gate_budget = 1'000'000;   // max gate evaluations per solve
  std::size_t table_budget = 5'000'000;  // max reach-table entries per DP run
  std::size_t type_budget = 100'000;     // hyper: max enumerated types
  std::optional<double> c_override;      // hyper: user-supplied hypercontractivity constant
  int k_cap = 4;                         // ksupport: max common support size
  std::size_t atom_cap = 10'000'000;     // exact convolution intermediate cap
};

enum class Scheme { kBernoulli, kKSupport, kHyper, kAuto };

Scheme scheme_from_name(const std::string& name);
std::string scheme_name(Scheme scheme);

/// Dispatch: bernoulli when all sizes are Bernoulli, ksupport when all sizes
/// share one finite support of size <= k_cap, hyper otherwise.
Scheme pick_scheme(const Instance& instance, const SolverConfig& config);

/// Runs the named scheme (resolving kAuto first). Throws
/// std::invalid_argument on a scheme/instance mismatch.
Solution solve(const Instance& instance, Scheme scheme, const Rational& epsilon,
               std::uint64_t seed, const SolverConfig& config = {});

}  // namespace stoknap

#endif
