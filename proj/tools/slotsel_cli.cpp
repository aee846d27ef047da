// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch CLI over the slot-selection library: instance generation, the two
// solvers, the baselines, and parameter sweeps.  Exit codes: 0 success,
// 2 infeasible-only results, 1 error.

#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slotsel/slotsel.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct InstancePaths {
  std::string trajectories;
  std::string billboards;
  std::string costs;
  std::string products;
};

void add_instance_options(CLI::App* cmd, InstancePaths& paths) {
  cmd->add_option("--trajectories", paths.trajectories, "trajectory CSV")->required();
  cmd->add_option("--billboards", paths.billboards, "billboard CSV")->required();
  cmd->add_option("--costs", paths.costs, "slot cost CSV")->required();
  cmd->add_option("--products", paths.products, "product CSV")->required();
}

slotsel::ProblemInstance load_instance(const InstancePaths& paths,
                                       std::int64_t slot_seconds,
                                       double lambda_m) {
  using namespace slotsel;
  auto products = load_products(paths.products);
  std::vector<std::string> product_ids;
  for (const auto& p : products) product_ids.push_back(p.product_id);

  auto trajectories = load_trajectories(paths.trajectories, product_ids);
  auto billboards = load_billboards(paths.billboards);
  const auto horizon = align_horizon(trajectories.require_horizon().first,
                                     trajectories.require_horizon().second,
                                     slot_seconds);

  ProblemInstance instance;
  instance.universe = derive_slots(std::move(billboards), horizon, slot_seconds);
  instance.matrix = build_influence_matrix(trajectories.records,
                                           instance.universe, lambda_m,
                                           product_ids);
  instance.costs = load_costs(paths.costs, instance.universe.size());
  instance.products = std::move(products);

  auto report = validate_instance(instance.universe, instance.costs,
                                  instance.products, &instance.matrix);
  for (const auto& f : report.findings) {
    std::cerr << (f.severity == ValidationFinding::Severity::Error ? "error: "
                                                                   : "warning: ")
              << f.message << '\n';
  }
  for (const auto& f : report.findings) {
    if (f.severity == ValidationFinding::Severity::Error) {
      throw std::runtime_error("instance failed validation");
    }
  }
  return instance;
}

void print_allocation(const slotsel::ProblemInstance& instance,
                      const slotsel::AllocationOutcome& outcome) {
  std::cout << "feasible=" << (outcome.feasible ? 1 : 0)
            << " cost=" << outcome.cost << " slots=" << outcome.slots_used()
            << " satisfied=" << outcome.satisfied_count(instance.products) << "/"
            << instance.products.size() << '\n';
  for (std::size_t i = 0; i < instance.products.size(); ++i) {
    std::cout << "  " << instance.products[i].product_id
              << " demand=" << instance.products[i].demand
              << " attained=" << outcome.attained[i]
              << " slots=" << outcome.sets[i].size()
              << " residual_budget=" << outcome.residual_budgets[i] << '\n';
  }
}

std::vector<double> parse_list(const std::vector<double>& v,
                               std::initializer_list<double> fallback) {
  return v.empty() ? std::vector<double>(fallback) : v;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace slotsel;

  CLI::App app{"Multi-product billboard slot selection"};
  app.require_subcommand(1);

  // ---- generate ----------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "emit a synthetic instance");
  gen->set_config("--config");
  GeneratorConfig gen_config;
  double gen_lambda = 100.0;
  double gen_beta = 0.05;
  std::optional<double> gen_alpha;
  std::string gen_out = ".";
  gen->add_option("--users", gen_config.users, "trajectory users");
  gen->add_option("--billboards", gen_config.billboards, "billboards");
  gen->add_option("--products", gen_config.products, "product count");
  gen->add_option("--time-steps", gen_config.time_steps, "records per user");
  gen->add_option("--slot-seconds", gen_config.step_seconds, "slot duration");
  gen->add_option("--grid", gen_config.grid, "street grid size");
  gen->add_option("--span-m", gen_config.span_m, "city edge length, meters");
  gen->add_option("--affinities", gen_config.affinities_per_user,
                  "products each user cares about");
  gen->add_option("--lambda-m", gen_lambda, "influence radius, meters");
  gen->add_option("--beta", gen_beta, "per-product demand / total supply");
  gen->add_option("--alpha", gen_alpha,
                  "total demand / total supply; overrides --beta");
  gen->add_option("--seed", gen_config.seed, "random seed");
  gen->add_option("--out", gen_out, "output directory");

  // ---- shared solver options ---------------------------------------------
  InstancePaths paths;
  std::int64_t slot_seconds = 3600;
  double lambda_m = 100.0;
  double epsilon = 0.1;
  std::uint64_t seed = 1;
  std::string out_prefix = "solution";
  std::string dump_matrix_path;

  auto add_solver_options = [&](CLI::App* cmd) {
    cmd->set_config("--config");
    add_instance_options(cmd, paths);
    cmd->add_option("--slot-seconds", slot_seconds, "slot duration");
    cmd->add_option("--lambda-m", lambda_m, "influence radius, meters");
    cmd->add_option("--epsilon", epsilon, "approximation parameter");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--out", out_prefix, "output file prefix");
    cmd->add_option("--dump-matrix", dump_matrix_path,
                    "write slot_id,user,probability to this path");
  };

  // ---- solve-common ------------------------------------------------------
  auto* common = app.add_subcommand("solve-common",
                                    "common slot set covering every product");
  add_solver_options(common);
  bool paper_exact_delta = false;
  std::size_t cardinality_cap = 0;
  bool trace = false;
  common->add_flag("--paper-exact-delta", paper_exact_delta,
                   "use the n^-5 stepsize (tiny instances only)");
  common->add_option("--cap", cardinality_cap,
                     "use a cardinality polytope with this cap");
  common->add_flag("--trace", trace, "dump the ascent trace");

  // ---- solve-disjoint ----------------------------------------------------
  auto* disjoint = app.add_subcommand("solve-disjoint",
                                      "disjoint per-product slot sets");
  add_solver_options(disjoint);
  DisjointConfig disjoint_config;
  bool exhaustive = false;
  bool ratio_greedy = false;
  disjoint->add_option("--confidence", disjoint_config.confidence_delta,
                       "Hoeffding confidence delta");
  disjoint->add_option("--max-samples", disjoint_config.max_samples,
                       "cap on sampled permutation pairs");
  disjoint->add_option("--pilot-fraction", disjoint_config.pilot_fraction,
                       "pilot share of the cap (0 = auto)");
  disjoint->add_flag("--exhaustive", exhaustive,
                     "enumerate all permutation pairs (small instances)");
  disjoint->add_flag("--ratio-greedy", ratio_greedy,
                     "pick slots by gain/cost instead of pure gain");
  disjoint->add_option("--threads", disjoint_config.workers,
                       "worker threads for the sample loop");

  // ---- baseline ----------------------------------------------------------
  auto* baseline = app.add_subcommand("baseline", "run a baseline allocator");
  add_solver_options(baseline);
  std::string baseline_algo = "random";
  baseline->add_option("--algo", baseline_algo, "random or topk")
      ->check(CLI::IsMember({"random", "topk"}));

  // ---- sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "grid experiment over synthetic "
                                            "instances");
  sweep->set_config("--config");
  ExperimentConfig experiment;
  std::vector<double> sweep_alphas, sweep_betas, sweep_epsilons, sweep_lambdas;
  std::vector<std::size_t> sweep_products;
  std::vector<std::uint64_t> sweep_seeds;
  std::vector<std::string> sweep_algos;
  std::string sweep_out = "metrics.csv";
  sweep->add_option("--alpha", sweep_alphas, "demand-supply ratios");
  sweep->add_option("--beta", sweep_betas, "per-product demand ratios");
  sweep->add_option("--products", sweep_products, "product counts");
  sweep->add_option("--epsilon", sweep_epsilons, "approximation parameters");
  sweep->add_option("--lambda-m", sweep_lambdas, "influence radii");
  sweep->add_option("--seed", sweep_seeds, "seeds, one row per seed");
  sweep->add_option("--algo", sweep_algos, "algorithms to run");
  sweep->add_option("--users", experiment.base.users, "trajectory users");
  sweep->add_option("--billboards", experiment.base.billboards, "billboards");
  sweep->add_option("--time-steps", experiment.base.time_steps, "records per user");
  sweep->add_option("--slot-seconds", experiment.base.step_seconds, "slot duration");
  sweep->add_option("--grid", experiment.base.grid, "street grid size");
  sweep->add_option("--span-m", experiment.base.span_m, "city edge length");
  sweep->add_option("--affinities", experiment.base.affinities_per_user,
                    "products each user cares about");
  sweep->add_option("--max-samples", experiment.sampler_max_samples,
                    "sampler permutation cap");
  sweep->add_option("--threads", experiment.threads, "worker threads");
  sweep->add_option("--out", sweep_out, "metrics CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      gen_config.validate();
      const double ratio = gen_alpha
                               ? *gen_alpha / static_cast<double>(gen_config.products)
                               : gen_beta;
      GeneratedInstance generated = generate_instance(gen_config, gen_lambda, ratio);
      std::filesystem::create_directories(gen_out);
      const auto dir = std::filesystem::path(gen_out);
      SyntheticWorld world = generate_synthetic_trajectories(gen_config);
      save_trajectories((dir / "trajectories.csv").string(), world.records);
      save_billboards((dir / "billboards.csv").string(), world.billboards);
      save_costs((dir / "costs.csv").string(), generated.instance.costs);
      save_products((dir / "products.csv").string(), generated.instance.products);
      std::ofstream cfg(dir / "instance.cfg");
      cfg << "slot-seconds=" << gen_config.step_seconds << '\n'
          << "lambda-m=" << gen_lambda << '\n'
          << "seed=" << gen_config.seed << '\n';
      std::cout << "wrote instance with " << generated.instance.universe.size()
                << " slots, " << world.records.size() << " records, supply="
                << generated.total_supply << " to " << gen_out << '\n';
      return kExitOk;
    }

    if (common->parsed()) {
      auto instance = load_instance(paths, slot_seconds, lambda_m);
      if (!dump_matrix_path.empty()) dump_matrix(dump_matrix_path, instance.matrix);
      BicriteriaConfig config;
      config.epsilon = epsilon;
      config.seed = seed;
      config.analysis_step = paper_exact_delta;
      if (cardinality_cap > 0) {
        config.polytope = BicriteriaConfig::PolytopeChoice::Cardinality;
        config.cardinality_cap = cardinality_cap;
      }
      GreedyTrace greedy_trace;
      CoverSolution sol =
          solve_common(instance, config, trace ? &greedy_trace : nullptr);
      dump_cover_solution(out_prefix + "_products.csv", out_prefix + "_slots.csv",
                          instance.products, sol);
      if (trace) greedy_trace.dump(out_prefix + "_trace.csv");
      std::cout << "slots=" << sol.slots.size() << " cost=" << sol.cost
                << " satisfied=" << sol.satisfied_count() << "/"
                << instance.products.size() << " rounds=" << sol.rounds_used
                << " repaired=" << sol.repaired_products.size() << '\n';
      return sol.satisfied_count() == instance.products.size() ? kExitOk
                                                               : kExitInfeasible;
    }

    if (disjoint->parsed()) {
      auto instance = load_instance(paths, slot_seconds, lambda_m);
      if (!dump_matrix_path.empty()) dump_matrix(dump_matrix_path, instance.matrix);
      disjoint_config.epsilon = epsilon;
      disjoint_config.seed = seed;
      disjoint_config.rule =
          ratio_greedy ? GreedyRule::GainPerCost : GreedyRule::PureGain;
      DisjointResult result =
          exhaustive ? solve_disjoint_exhaustive(instance, disjoint_config.rule)
                     : solve_disjoint(instance, disjoint_config);
      dump_disjoint_result(out_prefix + "_samples.csv",
                           out_prefix + "_allocation.csv", instance.products,
                           result);
      std::cout << "samples=" << result.stats.requested_samples
                << " feasible=" << result.stats.feasible_count;
      if (result.stats.best_cost) std::cout << " best_cost=" << *result.stats.best_cost;
      if (result.stats.pilot_fallback) std::cout << " (pilot found nothing feasible)";
      std::cout << '\n';
      print_allocation(instance, result.best);
      return result.best.feasible ? kExitOk : kExitInfeasible;
    }

    if (baseline->parsed()) {
      auto instance = load_instance(paths, slot_seconds, lambda_m);
      if (!dump_matrix_path.empty()) dump_matrix(dump_matrix_path, instance.matrix);
      AllocationOutcome outcome =
          baseline_algo == "random"
              ? random_allocation(instance.matrix, instance.costs,
                                  instance.products, seed)
              : topk_allocation(instance.matrix, instance.costs,
                                instance.products);
      DisjointResult wrapped;
      wrapped.best = outcome;
      wrapped.history.push_back({0, outcome.feasible, outcome.cost,
                                 outcome.satisfied_count(instance.products)});
      dump_disjoint_result(out_prefix + "_samples.csv",
                           out_prefix + "_allocation.csv", instance.products,
                           wrapped);
      print_allocation(instance, outcome);
      return outcome.feasible ? kExitOk : kExitInfeasible;
    }

    if (sweep->parsed()) {
      experiment.alphas = sweep_alphas;
      experiment.betas = parse_list(sweep_betas, {0.05});
      if (!sweep_products.empty()) experiment.product_counts = sweep_products;
      experiment.epsilons = parse_list(sweep_epsilons, {0.1});
      experiment.lambdas_m = parse_list(sweep_lambdas, {100.0});
      if (!sweep_seeds.empty()) experiment.seeds = sweep_seeds;
      if (!sweep_algos.empty()) experiment.algorithms = sweep_algos;
      auto rows = run_sweep(experiment);
      write_metrics_csv(sweep_out, rows);
      write_gnuplot_stub(sweep_out + ".gp", sweep_out);
      std::size_t feasible_rows = 0;
      for (const auto& r : rows) feasible_rows += !r.infeasible;
      std::cout << "wrote " << rows.size() << " rows (" << feasible_rows
                << " feasible) to " << sweep_out << '\n';
      if (rows.empty()) return kExitOk;
      return feasible_rows > 0 ? kExitOk : kExitInfeasible;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
