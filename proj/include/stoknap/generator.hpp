#ifndef STOKNAP_GENERATOR_HPP
#define STOKNAP_GENERATOR_HPP

#include <cstdint>
#include <string>

#include "stoknap/instance.hpp"

namespace stoknap {

/// Seeded random instance families used by the CLI `gen` command and the
/// test suites. The same options and seed always produce the same instance.
struct GenOptions {
  std::string family = "bernoulli";  // bernoulli | ksupport | hyper | pointmass
  std::size_t n = 10;
  int k = 2;  // ksupport: common support size
  std::uint64_t seed = 0;
  bool unit_profits = false;
  int max_profit = 30;  // pointmass: integer profits in [1, max_profit]
};

Instance generate_instance(const GenOptions& options);

}  // namespace stoknap

#endif
