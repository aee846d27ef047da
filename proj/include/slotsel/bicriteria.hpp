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

#ifndef SLOTSEL_BICRITERIA_HPP
#define SLOTSEL_BICRITERIA_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slotsel/continuous_greedy.hpp"
#include "slotsel/instance.hpp"
#include "slotsel/multilinear.hpp"
#include "slotsel/rng.hpp"

namespace slotsel {

inline constexpr double kOneMinusInvE = 1.0 - 0.36787944117144233;  // 1 - 1/e

struct BicriteriaConfig {
  double epsilon = 0.1;  // in (0,1)
  std::uint64_t seed = 0;

  // Continuous-greedy knobs.
  double greedy_horizon = 1.0;
  double step_size = 0.0;     // 0 -> default_step_size(n, horizon)
  bool analysis_step = false; // the literal n^-5 stepsize; toy n only

  // The constraint polytope: knapsack over the cost table with a doubled
  // budget search by default, or a fixed cardinality cap for ablations.
  enum class PolytopeChoice { KnapsackSearch, Cardinality };
  PolytopeChoice polytope = PolytopeChoice::KnapsackSearch;
  std::size_t cardinality_cap = 0;

  void validate() const {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
      throw std::invalid_argument("epsilon must be in (0,1)");
    }
    if (polytope == PolytopeChoice::Cardinality && cardinality_cap == 0) {
      throw std::invalid_argument("cardinality polytope needs a positive cap");
    }
  }
};

/// Per-product scaling so that every influence function is normalized to
/// I_j(BS) = 1.  Thresholds above the supply are capped at 1 and flagged.
struct NormalizedProducts {
  std::vector<std::uint32_t> product;  // matrix product index, in input order
  std::vector<double> scale;           // I_j(BS)
  std::vector<double> threshold;       // k_j / I_j(BS), capped at 1
  std::vector<bool> capped;            // demand exceeded supply

  std::size_t size() const { return product.size(); }

  bool all_zero() const {
    for (double t : threshold) {
      if (t > 0.0) return false;
    }
    return true;
  }
};

inline NormalizedProducts normalize(const InfluenceMatrix& matrix,
                                    const std::vector<ProductSpec>& products) {
  NormalizedProducts out;
  std::vector<SlotId> all;
  all.reserve(matrix.slot_count());
  for (SlotId s = 0; s < matrix.slot_count(); ++s) all.push_back(s);
  const SlotSet ground(std::move(all));
  for (const auto& p : products) {
    const std::uint32_t j = matrix.product_index(p.product_id);
    const double supply = product_influence(matrix, ground, j);
    if (supply <= 0.0 && p.threshold > 0.0) {
      throw std::runtime_error("product " + p.product_id +
                               " has positive threshold but zero attainable "
                               "influence; instance infeasible");
    }
    out.product.push_back(j);
    out.scale.push_back(supply);
    if (p.threshold <= 0.0) {
      out.threshold.push_back(0.0);
      out.capped.push_back(false);
    } else {
      const double t = p.threshold / supply;
      out.threshold.push_back(std::min(t, 1.0));
      out.capped.push_back(t > 1.0);
    }
  }
  return out;
}

/// Number of rounding rounds ceil(log_{1/(1-eps)} r), floored at one round
/// so a 1-sparse instance still gets a candidate set.
inline std::size_t rounding_rounds(double epsilon, std::uint32_t sparsity_r) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0,1)");
  }
  if (sparsity_r <= 1) return 1;
  const double rounds = std::ceil(std::log(static_cast<double>(sparsity_r)) /
                                  std::log(1.0 / (1.0 - epsilon)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(rounds));
}

/// Draws ceil(log_{1/(1-eps)} r) independent inclusion samples of x and
/// unions them; each slot ends up included with probability 1-(1-x_i)^l.
inline SlotSet round_and_union(const FractionalPoint& x, double epsilon,
                               std::uint32_t sparsity_r, std::uint64_t seed) {
  const std::size_t rounds = rounding_rounds(epsilon, sparsity_r);
  std::vector<SlotId> drawn;
  for (std::size_t t = 0; t < rounds; ++t) {
    Rng rng(mix_seed(seed, t));
    for (std::size_t s = 0; s < x.coords.size(); ++s) {
      const double xs = x.coords[s];
      if (xs > 0.0 && rng.uniform() < xs) drawn.push_back(static_cast<SlotId>(s));
    }
  }
  return SlotSet(std::move(drawn));
}

/// One common-slot solution with its per-product accounting in raw units.
struct CoverSolution {
  SlotSet slots;
  double cost = 0.0;
  std::vector<double> attained;          // I_j(S), input product order
  std::vector<bool> satisfied;           // attained >= (1-1/e-eps) * threshold
  std::size_t rounds_used = 0;
  std::vector<std::string> repaired_products;

  std::size_t satisfied_count() const {
    std::size_t k = 0;
    for (bool b : satisfied) k += b;
    return k;
  }
};

/// Greedy repair pass: any product below (1-1/e-2eps)k gets a from-scratch
/// set M_j grown by max marginal gain until (1-1/e)k, then unioned in.
inline CoverSolution repair(const InfluenceMatrix& matrix,
                            const CostTable& costs, SlotSet slots,
                            const std::vector<ProductSpec>& products,
                            const NormalizedProducts& norm, double epsilon,
                            std::size_t rounds_used) {
  const double trigger = kOneMinusInvE - 2.0 * epsilon;
  const double target = kOneMinusInvE;
  const std::size_t n = matrix.slot_count();

  CoverSolution sol;
  sol.rounds_used = rounds_used;

  for (std::size_t i = 0; i < norm.size(); ++i) {
    const std::uint32_t j = norm.product[i];
    const double k_norm = norm.threshold[i];
    if (k_norm <= 0.0 || norm.scale[i] <= 0.0) continue;
    const double current = product_influence(matrix, slots, j) / norm.scale[i];
    if (current >= trigger * k_norm) continue;

    sol.repaired_products.push_back(products[i].product_id);
    SlotSet repair_set;
    SurvivalCache cache(matrix, j);
    while (cache.value() / norm.scale[i] < target * k_norm) {
      SlotId best = 0;
      double best_gain = 0.0;
      bool found = false;
      for (SlotId s = 0; s < n; ++s) {
        if (repair_set.contains(s)) continue;
        const double g = cache.gain(s);
        if (g > best_gain) {
          best_gain = g;
          best = s;
          found = true;
        }
      }
      if (!found) {
        throw std::runtime_error("repair for product " + products[i].product_id +
                                 " exhausted the slot universe before reaching "
                                 "its bound");
      }
      repair_set.add(best);
      cache.add(best);
    }
    slots.merge(repair_set);
  }

  sol.slots = std::move(slots);
  for (SlotId s : sol.slots) sol.cost += costs[s];
  // Satisfaction is judged against the raw threshold: a product whose
  // demand exceeds its attainable supply stays unsatisfied even though the
  // capped repair bound holds.
  const double satisfy_level = kOneMinusInvE - epsilon;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    const double attained = product_influence(matrix, sol.slots, norm.product[i]);
    sol.attained.push_back(attained);
    sol.satisfied.push_back(attained >=
                            satisfy_level * products[i].threshold - 1e-12);
  }
  return sol;
}

namespace detail {

inline bool rounded_set_covers(const InfluenceMatrix& matrix, const SlotSet& s,
                               const NormalizedProducts& norm, double epsilon) {
  const double trigger = kOneMinusInvE - 2.0 * epsilon;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    if (norm.threshold[i] <= 0.0) continue;
    const double v = product_influence(matrix, s, norm.product[i]) / norm.scale[i];
    if (v < trigger * norm.threshold[i] - 1e-12) return false;
  }
  return true;
}

}  // namespace detail

/// The common-slot solver: normalize, continuous greedy at T=1 over the
/// constraint polytope, union of independent roundings, then greedy repair.
/// The knapsack budget is found by doubling search: the smallest power-of-
/// two multiple of the cheapest slot whose rounded set already covers every
/// product at the (1-1/e-2eps) level.  `trace_out`, when given, receives
/// the ascent trace of the final greedy run.
inline CoverSolution solve_common(const ProblemInstance& instance,
                                  const BicriteriaConfig& config,
                                  GreedyTrace* trace_out = nullptr) {
  config.validate();
  const InfluenceMatrix& matrix = instance.matrix;
  const auto norm = normalize(matrix, instance.products);

  if (norm.all_zero()) {
    CoverSolution empty;
    empty.rounds_used = 0;
    for (std::size_t i = 0; i < norm.size(); ++i) {
      empty.attained.push_back(0.0);
      empty.satisfied.push_back(true);
    }
    return empty;
  }

  const std::uint32_t r = std::max<std::uint32_t>(1, sparsity(matrix));
  const std::size_t rounds = rounding_rounds(config.epsilon, r);

  std::vector<std::pair<std::uint32_t, double>> terms;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    if (norm.scale[i] > 0.0) terms.emplace_back(norm.product[i], norm.scale[i]);
  }
  const Objective objective = Objective::sum_normalized(matrix, terms);

  const std::size_t n = matrix.slot_count();
  const double horizon = config.greedy_horizon;
  const double step = config.step_size > 0.0 ? config.step_size
                      : config.analysis_step ? analysis_step_size(n, horizon)
                                             : default_step_size(n, horizon);

  auto run_attempt = [&](const Polytope& polytope, std::uint64_t attempt) {
    GreedyResult greedy = continuous_greedy(objective, polytope, horizon, step);
    if (trace_out != nullptr) *trace_out = std::move(greedy.trace);
    return round_and_union(greedy.point, config.epsilon, r,
                           mix_seed(config.seed, attempt));
  };

  SlotSet candidate;
  if (config.polytope == BicriteriaConfig::PolytopeChoice::Cardinality) {
    candidate = run_attempt(Polytope::cardinality(config.cardinality_cap), 0);
  } else {
    const double total = instance.costs.total();
    double budget = instance.costs.min_cost();
    for (std::uint64_t attempt = 0;; ++attempt) {
      candidate = run_attempt(Polytope::knapsack(instance.costs.values(), budget),
                              attempt);
      if (detail::rounded_set_covers(matrix, candidate, norm, config.epsilon)) break;
      if (budget >= total) break;
      budget = std::min(budget * 2.0, total);
    }
  }

  CoverSolution sol = repair(matrix, instance.costs, std::move(candidate),
                             instance.products, norm, config.epsilon, rounds);

  // Hard postcondition of the repair pass.
  const double bound = kOneMinusInvE - 2.0 * config.epsilon;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    if (norm.threshold[i] <= 0.0) continue;
    const double v = sol.attained[i] / norm.scale[i];
    if (v < bound * norm.threshold[i] - 1e-9) {
      throw std::logic_error("cover bound violated for product " +
                             instance.products[i].product_id);
    }
  }
  return sol;
}

/// Solution dump `product_id,threshold,attained,satisfied` plus a slot list.
inline void dump_cover_solution(const std::string& products_path,
                                const std::string& slots_path,
                                const std::vector<ProductSpec>& products,
                                const CoverSolution& sol) {
  std::ofstream out(products_path);
  if (!out) throw std::runtime_error("cannot write " + products_path);
  out << "product_id,threshold,attained,satisfied\n";
  out.precision(17);
  for (std::size_t i = 0; i < products.size(); ++i) {
    out << products[i].product_id << ',' << products[i].threshold << ','
        << sol.attained[i] << ',' << (sol.satisfied[i] ? 1 : 0) << '\n';
  }
  std::ofstream slots(slots_path);
  if (!slots) throw std::runtime_error("cannot write " + slots_path);
  slots << "slot_id\n";
  for (SlotId s : sol.slots) slots << s << '\n';
}

}  // namespace slotsel

#endif  // SLOTSEL_BICRITERIA_HPP
