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

#ifndef SLOTSEL_SWEEP_HPP
#define SLOTSEL_SWEEP_HPP

#include <chrono>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "slotsel/baselines.hpp"
#include "slotsel/bicriteria.hpp"
#include "slotsel/disjoint.hpp"
#include "slotsel/generator.hpp"

namespace slotsel {

inline const std::vector<std::string> kAllAlgorithms = {
    "bca", "sampler", "random-baseline", "topk-baseline"};

/// Full sweep grid.  alpha (demand/supply) and beta (per-product share)
/// are coupled through alpha = beta * |P|; when alphas are given they set
/// the per-product ratio alpha/|P|, otherwise the betas do.
struct ExperimentConfig {
  std::vector<double> alphas;               // fractions, 1.0 == 100%
  std::vector<double> betas = {0.05};
  std::vector<std::size_t> product_counts = {20};
  std::vector<double> epsilons = {0.1};
  std::vector<double> lambdas_m = {100.0};
  std::vector<std::uint64_t> seeds = {1};
  std::vector<std::string> algorithms = kAllAlgorithms;

  GeneratorConfig base;                     // scale knobs; seed set per cell
  double sampler_confidence = 0.1;
  std::uint64_t sampler_max_samples = 256;
  int threads = 1;

  void validate() const {
    for (double a : alphas) {
      if (!(a > 0.0)) throw std::invalid_argument("alpha must be positive");
    }
    for (double b : betas) {
      if (!(b > 0.0)) throw std::invalid_argument("beta must be positive");
    }
    for (double e : epsilons) {
      if (!(e > 0.0) || !(e < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
    }
    for (double l : lambdas_m) {
      if (!(l > 0.0)) throw std::invalid_argument("lambda must be positive");
    }
    for (const auto& algo : algorithms) {
      if (std::find(kAllAlgorithms.begin(), kAllAlgorithms.end(), algo) ==
          kAllAlgorithms.end()) {
        throw std::invalid_argument("unknown algorithm: " + algo);
      }
    }
  }
};

struct MetricsRow {
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t products = 0;
  double epsilon = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::string algo;
  std::size_t satisfied = 0;
  double influence = 0.0;
  std::size_t slots = 0;
  double cost = 0.0;
  std::int64_t millis = 0;
  bool infeasible = false;  // cell failed or produced no feasible outcome
};

struct SweepCell {
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t products = 0;
  double epsilon = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::string algo;
};

inline std::vector<SweepCell> expand_grid(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::pair<double, double>> ratios;  // (alpha, beta)
  std::vector<SweepCell> cells;
  for (std::size_t products : config.product_counts) {
    ratios.clear();
    if (!config.alphas.empty()) {
      for (double a : config.alphas) {
        ratios.emplace_back(a, a / static_cast<double>(products));
      }
    } else {
      for (double b : config.betas) {
        ratios.emplace_back(b * static_cast<double>(products), b);
      }
    }
    for (const auto& [alpha, beta] : ratios) {
      for (double epsilon : config.epsilons) {
        for (double lambda : config.lambdas_m) {
          for (std::uint64_t seed : config.seeds) {
            for (const auto& algo : config.algorithms) {
              cells.push_back({alpha, beta, products, epsilon, lambda, seed, algo});
            }
          }
        }
      }
    }
  }
  return cells;
}

/// Runs one grid cell end to end: regenerate the instance for (seed,
/// lambda, |P|, beta) and apply the requested algorithm.  Failures and
/// infeasible outcomes become flagged rows, never exceptions.
inline MetricsRow run_cell(const ExperimentConfig& config, const SweepCell& cell) {
  MetricsRow row;
  row.alpha = cell.alpha;
  row.beta = cell.beta;
  row.products = cell.products;
  row.epsilon = cell.epsilon;
  row.lambda = cell.lambda;
  row.seed = cell.seed;
  row.algo = cell.algo;

  const auto start = std::chrono::steady_clock::now();
  try {
    GeneratorConfig g = config.base;
    g.products = cell.products;
    g.seed = cell.seed;
    GeneratedInstance generated = generate_instance(g, cell.lambda, cell.beta);
    const ProblemInstance& instance = generated.instance;

    if (cell.algo == "bca") {
      BicriteriaConfig bc;
      bc.epsilon = cell.epsilon;
      bc.seed = cell.seed;
      CoverSolution sol = solve_common(instance, bc);
      row.satisfied = sol.satisfied_count();
      row.influence = std::accumulate(sol.attained.begin(), sol.attained.end(), 0.0);
      row.slots = sol.slots.size();
      row.cost = sol.cost;
      row.infeasible = row.satisfied < instance.products.size();
    } else {
      AllocationOutcome outcome;
      if (cell.algo == "sampler") {
        DisjointConfig dc;
        dc.confidence_delta = config.sampler_confidence;
        dc.epsilon = cell.epsilon;
        dc.seed = cell.seed;
        dc.max_samples = config.sampler_max_samples;
        outcome = solve_disjoint(instance, dc).best;
      } else if (cell.algo == "random-baseline") {
        outcome = random_allocation(instance.matrix, instance.costs,
                                    instance.products, cell.seed);
      } else {
        outcome = topk_allocation(instance.matrix, instance.costs,
                                  instance.products);
      }
      row.satisfied = outcome.satisfied_count(instance.products);
      row.influence =
          std::accumulate(outcome.attained.begin(), outcome.attained.end(), 0.0);
      row.slots = outcome.slots_used();
      row.cost = outcome.cost;
      row.infeasible = !outcome.feasible;
    }
  } catch (const std::exception&) {
    row.infeasible = true;
  }
  row.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
                   .count();
  return row;
}

/// Cells run across a small worker pool; each worker owns a strided share
/// of the row vector, so the output order equals the grid order no matter
/// how many threads run.
inline std::vector<MetricsRow> run_sweep(const ExperimentConfig& config) {
  const auto cells = expand_grid(config);
  std::vector<MetricsRow> rows(cells.size());
  const int threads = std::max(1, config.threads);
  if (threads == 1 || cells.size() <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) rows[i] = run_cell(config, cells[i]);
    return rows;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = static_cast<std::size_t>(w); i < cells.size();
           i += static_cast<std::size_t>(threads)) {
        rows[i] = run_cell(config, cells[i]);
      }
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

inline const char* kMetricsHeader =
    "alpha,beta,products,epsilon,lambda,seed,algo,satisfied,influence,slots,"
    "cost,millis";

inline void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsHeader << '\n';
  out.precision(12);
  for (const auto& r : rows) {
    out << r.alpha << ',' << r.beta << ',' << r.products << ',' << r.epsilon
        << ',' << r.lambda << ',' << r.seed << ',' << r.algo << ','
        << r.satisfied << ',' << r.influence << ',' << r.slots << ',' << r.cost
        << ',' << r.millis << '\n';
  }
}

inline void write_metrics_csv(const std::string& path,
                              const std::vector<MetricsRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_metrics_csv(out, rows);
}

/// Companion plot stub: satisfied products and cost against alpha, one
/// curve per algorithm, reading the metrics CSV.
inline void write_gnuplot_stub(const std::string& path, const std::string& csv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "set datafile separator ','\n"
      << "set key outside\n"
      << "set xlabel 'alpha'\n"
      << "set ylabel 'satisfied products'\n"
      << "plot for [algo in 'bca sampler random-baseline topk-baseline'] \\\n"
      << "  '" << csv << "' using 1:(strcol(7) eq algo ? $8 : 1/0) \\\n"
      << "  with linespoints title algo\n";
}

}  // namespace slotsel

#endif  // SLOTSEL_SWEEP_HPP
