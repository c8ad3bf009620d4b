#include <doctest.h>

#include "stoknap/generator.hpp"
#include "stoknap/oracles.hpp"
#include "stoknap/scheme_bernoulli.hpp"
#include "testutil.hpp"

using namespace stoknap;
using testutil::bernoulli_instance;

TEST_CASE("rounding keeps q within half a grid step of p") {
  Instance inst = bernoulli_instance({{Rational(37, 100), 1},
                                      {Rational(1, 3), 2},
                                      {Rational(99, 100), 3},
                                      {Rational(1, 1000), 4}},
                                     Rational(2), Rational(1, 4));
  Rational eps(1, 5);
  BernoulliInstance b = make_bernoulli_instance(inst, eps);
  const auto n = static_cast<long long>(inst.items.size());
  for (std::size_t i = 0; i < b.p.size(); ++i) {
    Rational diff = abs(b.q[i] - b.p[i]);
    CHECK(diff <= eps / (8 * n));
    CHECK(b.q[i] >= 0);
    CHECK(b.q[i] <= 1);
    CHECK(b.q[i] == Rational(b.q_count[i]) * b.grid);
  }
}

TEST_CASE("bucket partition follows the boundary rules") {
  Rational eps(1, 5);  // eps/100 = 1/500
  std::vector<Rational> p = {
      Rational(1, 500),                // boundary of b1 -> b1
      Rational(1, 1000),               // below -> b1
      Rational(499, 500),              // boundary of b2 -> b2
      Rational(1, 2),                  // boundary b3/b4 -> b3
      Rational(3, 10),                 // b3
      Rational(7, 10),                 // b4
      Rational(1) - Rational(1, 1000), // 1 - eps/200 -> b2
  };
  BucketPartition buckets = partition_buckets(p, eps);
  CHECK(buckets.b1 == std::vector<int>{0, 1});
  CHECK(buckets.b2 == std::vector<int>{2, 6});
  CHECK(buckets.b3 == std::vector<int>{3, 4});
  CHECK(buckets.b4 == std::vector<int>{5});
}

TEST_CASE("moment count is the exact ceiling of 4 log2(1/eps)") {
  CHECK(moment_count_t0(Rational(1, 4)) == 8);    // 4 log2 4 = 8 exactly
  CHECK(moment_count_t0(Rational(1, 5)) == 10);   // 2^9 = 512 < 625 <= 1024
  CHECK(moment_count_t0(Rational(1, 2)) == 4);
  CHECK(moment_count_t0(Rational(1, 40)) == 22);  // 2^21 < 40^4 <= 2^22
}

namespace {

Gate sub_gate(const Instance& inst, const Rational& eps, std::uint64_t seed) {
  return Gate(distributions_of(inst), inst.capacity,
              inst.overflow_budget + Rational(7, 2) * eps, eps / 2, 1e-10, seed);
}

}  // namespace

TEST_CASE("sk_bernoulli_large picks up everything when all q round to zero") {
  Instance inst = bernoulli_instance({{Rational(1, 10000), 2}, {Rational(1, 9000), 3}},
                                     Rational(1, 2), Rational(1, 10));
  Rational eps(1, 5);
  BernoulliInstance b = make_bernoulli_instance(inst, eps);
  for (const auto& q : b.q) CHECK(q == 0);
  Gate gate = sub_gate(inst, eps, 7);
  auto result = sk_bernoulli_large(b, gate);
  REQUIRE(result.has_value());
  CHECK(result->subset == std::vector<int>{0, 1});
  CHECK(result->profit == 5);
}

TEST_CASE("sk_bernoulli_large output stays within the widened budget") {
  Instance inst = bernoulli_instance(
      std::vector<std::pair<Rational, Rational>>(10, {Rational(1, 2), 1}), Rational(13, 2),
      Rational(2, 5));
  Rational eps(1, 10);
  BernoulliInstance b = make_bernoulli_instance(inst, eps);
  Gate gate = sub_gate(inst, eps, 11);
  auto result = sk_bernoulli_large(b, gate);
  REQUIRE(result.has_value());
  CHECK(testutil::exact_overflow(inst, result->subset) <= inst.overflow_budget + 4 * eps);
}

TEST_CASE("sk_bernoulli_small beats the exact optimum under the relaxed budget") {
  // 8 items Bernoulli(1/4), unit profits, C = 3.5, p = .35.
  Instance inst = bernoulli_instance(
      std::vector<std::pair<Rational, Rational>>(8, {Rational(1, 4), 1}), Rational(7, 2),
      Rational(7, 20));
  Rational eps(1, 5);
  BernoulliInstance b = make_bernoulli_instance(inst, eps);
  Gate gate = sub_gate(inst, eps, 13);
  auto result = sk_bernoulli_small(b, gate);
  REQUIRE(result.has_value());
  auto [opt_profit, opt_subset] = testutil::exact_opt(inst);
  CHECK(result->profit >= opt_profit);
  CHECK(testutil::exact_overflow(inst, result->subset) <= inst.overflow_budget + 4 * eps);
}

TEST_CASE("one item near certainty lands in bucket two") {
  Rational eps(1, 5);
  std::vector<Rational> p = {1 - eps / 200};
  BucketPartition buckets = partition_buckets(p, eps);
  CHECK(buckets.b2 == std::vector<int>{0});
}

TEST_CASE("solve_bernoulli spec examples") {
  SUBCASE("single item within budget is selected") {
    Instance inst = bernoulli_instance({{Rational(1, 2), 1}}, Rational(1, 2), Rational(3, 5));
    Solution sol = solve_bernoulli(inst, Rational(1, 10), 5);
    CHECK(sol.selected == std::vector<int>{0});
    CHECK(sol.total_profit == 1);
  }
  SUBCASE("budget one accepts every item") {
    Instance inst = bernoulli_instance({{Rational(9, 10), 2}, {Rational(8, 10), 3}},
                                       Rational(1, 4), Rational(1));
    Solution sol = solve_bernoulli(inst, Rational(1, 10), 6);
    CHECK(sol.selected == std::vector<int>{0, 1});
  }
  SUBCASE("zero budget with ample capacity accepts every item") {
    Instance inst = bernoulli_instance(
        std::vector<std::pair<Rational, Rational>>(5, {Rational(1, 2), 1}), Rational(6),
        Rational(0));
    Solution sol = solve_bernoulli(inst, Rational(1, 10), 7);
    CHECK(sol.selected == std::vector<int>{0, 1, 2, 3, 4});
  }
  SUBCASE("non-bernoulli item is rejected by name") {
    Instance inst;
    inst.items.push_back(Item{Gaussian{1, 1}, Rational(1)});
    inst.capacity = 1;
    inst.overflow_budget = Rational(1, 2);
    CHECK_THROWS_WITH_AS(solve_bernoulli(inst, Rational(1, 10), 8),
                         doctest::Contains("item 0"), std::invalid_argument);
  }
}

TEST_CASE("rounding shifts any subset's overflow by at most eps/4") {
  RngStream rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6;
    Instance inst;
    for (int i = 0; i < n; ++i) {
      inst.items.push_back(
          Item{Bernoulli{Rational(1 + static_cast<long long>(rng.next_u64() % 99), 100)},
               Rational(1)});
    }
    inst.capacity = Rational(1 + static_cast<long long>(rng.next_u64() % 4));
    inst.overflow_budget = Rational(1, 2);
    Rational eps(1, 5);
    BernoulliInstance b = make_bernoulli_instance(inst, eps);

    std::uint64_t mask = rng.next_u64() % (1u << n);
    std::vector<SizeDistribution> original, rounded;
    for (int i = 0; i < n; ++i) {
      if (!(mask & (std::uint64_t(1) << i))) continue;
      original.push_back(Bernoulli{b.p[i]});
      rounded.push_back(Bernoulli{b.q[i]});
    }
    Rational diff = abs(tail_prob(exact_sum_pmf(original), inst.capacity) -
                        tail_prob(exact_sum_pmf(rounded), inst.capacity));
    CHECK(diff <= eps / 4);
  }
}

TEST_CASE("equal first two moments at large variance force small total variation") {
  // Two probability triples with equal sums and equal sums of squares,
  // replicated until the variance clears 1/eps^2; the two sums must then be
  // close in total variation.
  const Rational eps(1, 4);
  std::vector<SizeDistribution> x, y;
  for (int copy = 0; copy < 40; ++copy) {
    for (long long v : {1, 5, 6}) x.push_back(Bernoulli{Rational(v, 14)});
    for (long long v : {2, 3, 7}) y.push_back(Bernoulli{Rational(v, 14)});
  }
  Rational sx = 0, sx2 = 0, sy = 0, sy2 = 0, var = 0;
  for (const auto& d : x) {
    Rational p = std::get<Bernoulli>(d).p;
    sx += p;
    sx2 += p * p;
    var += p * (1 - p);
  }
  for (const auto& d : y) {
    Rational p = std::get<Bernoulli>(d).p;
    sy += p;
    sy2 += p * p;
  }
  REQUIRE(sx == sy);
  REQUIRE(sx2 == sy2);
  REQUIRE(var >= 1 / (eps * eps));
  CHECK(tv_distance_exact(exact_sum_pmf(x), exact_sum_pmf(y)) <= 3 * eps);
}

TEST_CASE("epsilon-zero contract on seeded random instances") {
  for (int trial = 0; trial < 15; ++trial) {
    GenOptions options;
    options.family = "bernoulli";
    options.n = 5 + trial % 5;
    options.seed = 500 + trial;
    Instance inst = generate_instance(options);
    Rational eps(1, 5);
    Solution sol = solve_bernoulli(inst, eps, 1000 + trial);
    BruteForceResult brute = brute_force_opt(inst);
    CHECK(sol.total_profit >= brute.profit);
    CHECK(testutil::exact_overflow(inst, sol.selected) <= inst.overflow_budget + eps);
  }
}
