#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "stoknap/generator.hpp"
#include "stoknap/instance.hpp"
#include "stoknap/solver.hpp"

using namespace stoknap;
using nlohmann::json;

namespace {

const std::string kCli = STOKNAP_CLI_PATH;

int run(const std::string& args) {
  std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("instance json round trip is exact") {
  for (const char* family : {"bernoulli", "ksupport", "hyper", "pointmass"}) {
    GenOptions options;
    options.family = family;
    options.n = 7;
    options.seed = 11;
    Instance inst = generate_instance(options);
    Instance back = instance_from_json(instance_to_json(inst));
    CHECK(instance_to_json(back) == instance_to_json(inst));
  }
}

TEST_CASE("auto dispatch picks the structurally right scheme") {
  SolverConfig config;
  GenOptions options;
  options.n = 5;
  options.seed = 2;

  options.family = "bernoulli";
  CHECK(pick_scheme(generate_instance(options), config) == Scheme::kBernoulli);

  options.family = "ksupport";
  options.k = 3;
  CHECK(pick_scheme(generate_instance(options), config) == Scheme::kKSupport);

  options.family = "hyper";
  CHECK(pick_scheme(generate_instance(options), config) == Scheme::kHyper);

  options.family = "ksupport";
  options.k = 6;  // beyond the default support cap
  CHECK(pick_scheme(generate_instance(options), config) == Scheme::kHyper);
}

TEST_CASE("gen is deterministic byte for byte") {
  REQUIRE(run("gen --family bernoulli --n 10 --seed 7 --output /tmp/stoknap_gen_a.json") == 0);
  REQUIRE(run("gen --family bernoulli --n 10 --seed 7 --output /tmp/stoknap_gen_b.json") == 0);
  CHECK(slurp("/tmp/stoknap_gen_a.json") == slurp("/tmp/stoknap_gen_b.json"));
  CHECK(!slurp("/tmp/stoknap_gen_a.json").empty());
}

TEST_CASE("solve writes identical solutions for a fixed seed") {
  REQUIRE(run("gen --family bernoulli --n 6 --seed 3 --output /tmp/stoknap_cli_inst.json") == 0);
  REQUIRE(run("solve --instance /tmp/stoknap_cli_inst.json --epsilon 1/5 --seed 9 "
              "--output /tmp/stoknap_sol_a.json") == 0);
  REQUIRE(run("solve --instance /tmp/stoknap_cli_inst.json --epsilon 1/5 --seed 9 "
              "--output /tmp/stoknap_sol_b.json") == 0);
  json a = read_json("/tmp/stoknap_sol_a.json");
  json b = read_json("/tmp/stoknap_sol_b.json");
  a.erase("wall_time_ms");
  b.erase("wall_time_ms");
  CHECK(a == b);
  CHECK(a.at("scheme") == "bernoulli");  // auto picks the bernoulli path
}

TEST_CASE("solve rejects a scheme mismatch with exit code 1") {
  Instance inst;
  inst.items.push_back(Item{Gaussian{1, 0.5}, Rational(2)});
  inst.capacity = 2;
  inst.overflow_budget = Rational(1, 2);
  std::ofstream out("/tmp/stoknap_gauss.json");
  out << instance_to_json(inst).dump() << "\n";
  out.close();
  CHECK(run("solve --instance /tmp/stoknap_gauss.json --scheme bernoulli") == 1);
  CHECK(run("solve --instance /tmp/stoknap_missing.json") == 1);
}

TEST_CASE("estimate on the empty subset reports zero overflow") {
  REQUIRE(run("gen --family bernoulli --n 4 --seed 5 --output /tmp/stoknap_est_inst.json") == 0);
  REQUIRE(run("estimate --instance /tmp/stoknap_est_inst.json --subset '' "
              "--output /tmp/stoknap_est.json") == 0);
  json est = read_json("/tmp/stoknap_est.json");
  CHECK(est.at("estimate").get<double>() == 0.0);
}

TEST_CASE("check-hyper reports the laplace kurtosis") {
  Instance inst;
  inst.items.push_back(Item{Laplace{1, 0.5}, Rational(1)});
  inst.capacity = 2;
  inst.overflow_budget = Rational(1, 2);
  std::ofstream out("/tmp/stoknap_laplace.json");
  out << instance_to_json(inst).dump() << "\n";
  out.close();
  REQUIRE(run("check-hyper --instance /tmp/stoknap_laplace.json "
              "--output /tmp/stoknap_hyper.json") == 0);
  json report = read_json("/tmp/stoknap_hyper.json");
  CHECK(report.at("items")[0].at("kurtosis").get<double>() == doctest::Approx(6.0));
  CHECK(report.at("c4").get<double>() == doctest::Approx(6.0));
}

TEST_CASE("brute and solve agree through the files") {
  REQUIRE(run("gen --family bernoulli --n 6 --seed 21 --output /tmp/stoknap_cmp_inst.json") == 0);
  REQUIRE(run("brute --instance /tmp/stoknap_cmp_inst.json --output /tmp/stoknap_cmp_brute.json") ==
          0);
  REQUIRE(run("solve --instance /tmp/stoknap_cmp_inst.json --epsilon 1/5 "
              "--output /tmp/stoknap_cmp_sol.json") == 0);
  json brute = read_json("/tmp/stoknap_cmp_brute.json");
  json sol = read_json("/tmp/stoknap_cmp_sol.json");
  Rational brute_profit = parse_rational(brute.at("total_profit").get<std::string>());
  Rational sol_profit = parse_rational(sol.at("total_profit").get<std::string>());
  CHECK(sol_profit >= brute_profit);
}

TEST_CASE("solve then estimate reproduces the reported overflow") {
  REQUIRE(run("gen --family bernoulli --n 6 --seed 33 --output /tmp/stoknap_re_inst.json") == 0);
  REQUIRE(run("solve --instance /tmp/stoknap_re_inst.json --epsilon 1/5 --seed 4 "
              "--output /tmp/stoknap_re_sol.json") == 0);
  json sol = read_json("/tmp/stoknap_re_sol.json");
  std::string subset;
  for (const auto& idx : sol.at("selected")) {
    if (!subset.empty()) subset += ",";
    subset += std::to_string(idx.get<int>());
  }
  REQUIRE(run("estimate --instance /tmp/stoknap_re_inst.json --subset '" + subset +
              "' --tau 0.005 --seed 77 --output /tmp/stoknap_re_est.json") == 0);
  json est = read_json("/tmp/stoknap_re_est.json");
  double gap = std::abs(est.at("estimate").get<double>() -
                        sol.at("overflow").at("estimate").get<double>());
  CHECK(gap <= est.at("half_width").get<double>() +
                   sol.at("overflow").at("half_width").get<double>());
}

TEST_CASE("selftest passes") { CHECK(run("selftest") == 0); }
