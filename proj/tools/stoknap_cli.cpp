// Batch front door: instance I/O, scheme dispatch, brute-force baselines and
// Monte Carlo diagnostics. JSON in, JSON out, newline-terminated; exit code 0
// on success, 1 on invalid input, 2 on exceeded budgets.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stoknap/errors.hpp"
#include "stoknap/generator.hpp"
#include "stoknap/instance.hpp"
#include "stoknap/oracles.hpp"
#include "stoknap/scheme_bernoulli.hpp"
#include "stoknap/scheme_hyper.hpp"
#include "stoknap/scheme_ksupport.hpp"
#include "stoknap/solver.hpp"

namespace {

using nlohmann::json;
using namespace stoknap;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  json j;
  in >> j;
  return j;
}

void emit(const json& j, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw std::invalid_argument("cannot write '" + output_path + "'");
  out << j.dump(2) << "\n";
}

std::vector<int> parse_subset(const std::string& spec) {
  std::vector<int> subset;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    subset.push_back(std::stoi(token));
  }
  return subset;
}

int run_selftest() {
  // A handful of closed-form sanity checks, then one tiny end-to-end solve.
  MomentSummary g = moments(Gaussian{0, 1});
  if (!g.kurtosis || std::abs(*g.kurtosis - 3.0) > 1e-12) return 1;
  Pmf coin = exact_sum_pmf(std::vector<SizeDistribution>{Bernoulli{Rational(1, 2)},
                                                         Bernoulli{Rational(1, 2)}});
  if (coin.atoms.size() != 3 || coin.atoms[1].second != Rational(1, 2)) return 1;
  GenOptions options;
  options.family = "bernoulli";
  options.n = 5;
  options.seed = 7;
  Instance instance = generate_instance(options);
  Solution solution = solve(instance, Scheme::kAuto, Rational(1, 5), 7);
  Rational overflow = tail_prob(exact_sum_pmf(distributions_of(instance, solution.selected)),
                                instance.capacity);
  if (overflow > instance.overflow_budget + Rational(1, 5)) return 1;
  std::cout << "selftest ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chance-constrained stochastic knapsack solver"};
  app.require_subcommand(1);

  std::string instance_path, output_path, scheme_flag = "auto", epsilon_flag, subset_flag;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double delta = 0, tau = 0.01;
  std::size_t type_budget = 0;
  std::size_t brute_cap = 20;
  double c_override = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--instance", instance_path, "instance JSON path")->required();
    cmd->add_option("--output", output_path, "output path (stdout when omitted)");
    cmd->add_option("--seed", seed, "master seed")->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--delta", delta, "Monte Carlo failure budget");
  };

  CLI::App* cmd_solve = app.add_subcommand("solve", "run an approximation scheme");
  add_common(cmd_solve);
  cmd_solve->add_option("--epsilon", epsilon_flag, "error parameter (rational or decimal)");
  cmd_solve->add_option("--scheme", scheme_flag, "bernoulli|ksupport|hyper|auto");
  cmd_solve->add_option("--type-budget", type_budget, "hyper: max enumerated types");
  cmd_solve->add_option("--c-override", c_override, "hyper: hypercontractivity constant override");

  CLI::App* cmd_brute = app.add_subcommand("brute", "exhaustive baseline");
  add_common(cmd_brute);
  cmd_brute->add_option("--brute-cap", brute_cap, "max items for enumeration");
  cmd_brute->add_option("--tau", tau, "Monte Carlo accuracy for continuous instances");

  CLI::App* cmd_estimate = app.add_subcommand("estimate", "overflow probability of a subset");
  add_common(cmd_estimate);
  cmd_estimate->add_option("--subset", subset_flag, "comma-separated item indices");
  cmd_estimate->add_option("--tau", tau, "additive accuracy");

  CLI::App* cmd_check = app.add_subcommand("check-hyper", "per-item kurtosis report");
  cmd_check->add_option("--instance", instance_path, "instance JSON path")->required();
  cmd_check->add_option("--output", output_path, "output path (stdout when omitted)");

  CLI::App* cmd_gen = app.add_subcommand("gen", "emit a seeded random instance");
  GenOptions gen_options;
  cmd_gen->add_option("--family", gen_options.family, "bernoulli|ksupport|hyper|pointmass");
  cmd_gen->add_option("--n", gen_options.n, "item count")->required();
  cmd_gen->add_option("--k", gen_options.k, "ksupport support size");
  cmd_gen->add_option("--seed", gen_options.seed, "generator seed");
  cmd_gen->add_flag("--unit-profits", gen_options.unit_profits, "all profits 1");
  cmd_gen->add_option("--max-profit", gen_options.max_profit, "pointmass profit bound");
  cmd_gen->add_option("--output", output_path, "output path (stdout when omitted)");

  app.add_subcommand("selftest", "quick internal sanity checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("selftest")) return run_selftest();
    if (app.got_subcommand("gen")) {
      emit(instance_to_json(generate_instance(gen_options)), output_path);
      return 0;
    }

    Instance instance = instance_from_json(read_json_file(instance_path));
    if (seed_set) instance.seed = seed;
    if (delta > 0) instance.delta = delta;

    SolverConfig config;
    config.delta_total = instance.delta;
    if (type_budget > 0) config.type_budget = type_budget;
    if (c_override > 0) config.c_override = c_override;

    if (app.got_subcommand("solve")) {
      Rational epsilon =
          epsilon_flag.empty() ? instance.epsilon : parse_rational(epsilon_flag);
      Solution solution =
          solve(instance, scheme_from_name(scheme_flag), epsilon, instance.seed, config);
      emit(solution_to_json(solution), output_path);
      return 0;
    }
    if (app.got_subcommand("brute")) {
      BruteForceConfig brute_config;
      brute_config.max_items = brute_cap;
      brute_config.tau = tau;
      brute_config.delta = instance.delta;
      brute_config.seed = instance.seed;
      BruteForceResult result = brute_force_opt(instance, brute_config);
      Solution solution;
      solution.selected = result.subset;
      solution.total_profit = result.profit;
      solution.scheme = "brute";
      solution.epsilon = instance.epsilon;
      solution.seed = instance.seed;
      RngStream report(derive_seed(instance.seed, "report"));
      solution.overflow = mc_overflow(distributions_of(instance, solution.selected),
                                      instance.capacity, tau, instance.delta, report);
      emit(solution_to_json(solution), output_path);
      return 0;
    }
    if (app.got_subcommand("estimate")) {
      std::vector<int> subset = parse_subset(subset_flag);
      RngStream stream(derive_seed(instance.seed, "estimate"));
      OverflowEstimate estimate = mc_overflow(distributions_of(instance, subset),
                                              instance.capacity, tau, instance.delta, stream);
      emit(json{{"estimate", estimate.point_estimate},
                {"half_width", estimate.half_width},
                {"confidence", estimate.confidence},
                {"samples_used", estimate.samples_used}},
           output_path);
      return 0;
    }
    if (app.got_subcommand("check-hyper")) {
      json items = json::array();
      double worst = 1.0;
      bool all_defined = true;
      for (std::size_t i = 0; i < instance.items.size(); ++i) {
        MomentSummary m = moments(instance.items[i].dist);
        json row{{"item", i},
                 {"family", family_name(instance.items[i].dist)},
                 {"mean", m.mean},
                 {"var", m.var},
                 {"mu4", m.mu4}};
        if (m.kurtosis) {
          row["kurtosis"] = *m.kurtosis;
          worst = std::max(worst, *m.kurtosis);
        } else {
          row["kurtosis"] = "undefined";
          all_defined = false;
        }
        items.push_back(row);
      }
      json report{{"items", items}};
      if (all_defined) {
        report["c4"] = worst;
        report["c"] = std::pow(worst, 0.25);
      } else {
        report["note"] = "zero-variance items have undefined kurtosis; c omitted";
      }
      emit(report, output_path);
      return 0;
    }
  } catch (const BudgetError& err) {
    std::cerr << "budget error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
