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

#ifndef SLOTSEL_GENERATOR_HPP
#define SLOTSEL_GENERATOR_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "slotsel/instance.hpp"
#include "slotsel/rng.hpp"

namespace slotsel {

// The three cost/demand/budget rules, kept as pure functions so the drawn
// random factors can be recorded and the arithmetic spot-checked.

/// Slot cost floor(delta * influence / 10), clamped to one currency unit so
/// costs stay positive.
inline double cost_value(double singleton_influence, double delta_factor) {
  return std::max(1.0, std::floor(delta_factor * singleton_influence / 10.0));
}

/// Product demand floor(omega * supply * ratio).
inline double demand_value(double total_supply, double ratio, double omega) {
  return std::floor(omega * total_supply * ratio);
}

/// Product payment floor(eta * demand); doubles as the per-product budget.
inline double budget_value(double demand, double eta) {
  return std::floor(eta * demand);
}

inline constexpr double kCostFactorLo = 0.8, kCostFactorHi = 1.1;
inline constexpr double kDemandFactorLo = 0.8, kDemandFactorHi = 1.2;
inline constexpr double kBudgetFactorLo = 0.9, kBudgetFactorHi = 1.1;

struct CostGeneration {
  CostTable costs;
  std::vector<double> factors;  // drawn delta per slot
};

inline CostGeneration generate_costs(const InfluenceMatrix& matrix,
                                     std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x636f7374));  // "cost"
  CostGeneration out;
  std::vector<double> cost(matrix.slot_count(), 0.0);
  out.factors.reserve(matrix.slot_count());
  for (std::size_t s = 0; s < matrix.slot_count(); ++s) {
    const double delta = rng.uniform(kCostFactorLo, kCostFactorHi);
    out.factors.push_back(delta);
    cost[s] = cost_value(singleton_influence(matrix, static_cast<SlotId>(s)), delta);
  }
  out.costs = CostTable(std::move(cost));
  return out;
}

struct DemandGeneration {
  std::vector<double> demands;
  std::vector<double> factors;  // drawn omega per product
};

/// Demands for `count` products at per-product demand ratio `ratio` of the
/// total supply.  The omega draws depend only on (seed, count), so sweeping
/// the ratio rescales every demand monotonically.
inline DemandGeneration generate_demands(double total_supply, double ratio,
                                         std::size_t count, std::uint64_t seed) {
  if (!(total_supply > 0.0)) {
    throw std::invalid_argument("total supply must be positive");
  }
  Rng rng(mix_seed(seed, 0x64656d64));  // "demd"
  DemandGeneration out;
  for (std::size_t i = 0; i < count; ++i) {
    const double omega = rng.uniform(kDemandFactorLo, kDemandFactorHi);
    out.factors.push_back(omega);
    out.demands.push_back(demand_value(total_supply, ratio, omega));
  }
  return out;
}

struct BudgetGeneration {
  std::vector<double> budgets;
  std::vector<double> factors;  // drawn eta per product
  double total = 0.0;
};

inline BudgetGeneration generate_budgets(const std::vector<double>& demands,
                                         std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x62756467));  // "budg"
  BudgetGeneration out;
  for (double demand : demands) {
    const double eta = rng.uniform(kBudgetFactorLo, kBudgetFactorHi);
    out.factors.push_back(eta);
    out.budgets.push_back(budget_value(demand, eta));
    out.total += out.budgets.back();
  }
  return out;
}

/// Scale knobs for the synthetic city: users walking a street grid past
/// randomly placed billboards.  Small defaults; everything is configurable.
struct GeneratorConfig {
  std::size_t users = 40;
  std::size_t billboards = 8;
  std::size_t products = 4;
  std::size_t time_steps = 24;       // records per user
  std::int64_t step_seconds = 3600;  // also the slot duration
  std::size_t grid = 8;              // grid x grid street intersections
  double span_m = 1000.0;            // city edge length
  std::size_t affinities_per_user = 1;
  double base_lat = 40.0;
  double base_lon = -74.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (products == 0) throw std::invalid_argument("need at least one product");
    if (users == 0) throw std::invalid_argument("need at least one user");
    if (billboards == 0) throw std::invalid_argument("need at least one billboard");
    if (grid < 2) throw std::invalid_argument("grid must be at least 2x2");
    if (time_steps == 0) throw std::invalid_argument("need at least one time step");
    if (step_seconds <= 0) throw std::invalid_argument("step must be positive");
  }
};

struct SyntheticWorld {
  std::vector<TrajectoryRecord> records;
  std::vector<Billboard> billboards;
  std::vector<std::string> product_ids;
  std::pair<std::int64_t, std::int64_t> horizon;
};

inline std::string product_name(std::size_t index, std::size_t count) {
  std::size_t width = 1;
  for (std::size_t c = count; c >= 10; c /= 10) ++width;
  std::string digits = std::to_string(index + 1);
  return "p" + std::string(width > digits.size() ? width - digits.size() : 0, '0') +
         digits;
}

/// Users random-walk the street grid, one record per time step; billboards
/// sit at random intersections with sizes uniform in [1, 4].  Bit-exactly
/// regenerable from (config, seed).
inline SyntheticWorld generate_synthetic_trajectories(const GeneratorConfig& config) {
  config.validate();
  Rng rng(mix_seed(config.seed, 0x776f726c));  // "worl"

  SyntheticWorld world;
  for (std::size_t j = 0; j < config.products; ++j) {
    world.product_ids.push_back(product_name(j, config.products));
  }

  const double spacing = config.span_m / static_cast<double>(config.grid - 1);
  const double lat_per_m = 1.0 / 111320.0;
  const double lon_per_m =
      1.0 / (111320.0 * std::cos(config.base_lat * 3.14159265358979323846 / 180.0));
  auto lat_of = [&](std::size_t gy) { return config.base_lat + gy * spacing * lat_per_m; };
  auto lon_of = [&](std::size_t gx) { return config.base_lon + gx * spacing * lon_per_m; };

  for (std::size_t b = 0; b < config.billboards; ++b) {
    Billboard bb;
    bb.billboard_id = "b" + std::to_string(b + 1);
    bb.lat = lat_of(rng.below(config.grid));
    bb.lon = lon_of(rng.below(config.grid));
    bb.size = rng.uniform(1.0, 4.0);
    world.billboards.push_back(std::move(bb));
  }

  const std::int64_t t0 = 0;
  for (std::size_t u = 0; u < config.users; ++u) {
    const std::string user = "u" + std::to_string(u + 1);
    std::vector<std::string> affinities;
    auto pick = identity_permutation(config.products);
    rng.shuffle(pick);
    const std::size_t howmany = std::min(config.affinities_per_user, config.products);
    for (std::size_t a = 0; a < howmany; ++a) {
      affinities.push_back(world.product_ids[pick[a]]);
    }
    std::sort(affinities.begin(), affinities.end());

    std::size_t gx = rng.below(config.grid);
    std::size_t gy = rng.below(config.grid);
    for (std::size_t step = 0; step < config.time_steps; ++step) {
      TrajectoryRecord r;
      r.user = user;
      r.lat = lat_of(gy);
      r.lon = lon_of(gx);
      r.interval = {t0 + static_cast<std::int64_t>(step) * config.step_seconds,
                    t0 + static_cast<std::int64_t>(step + 1) * config.step_seconds};
      r.affinities = affinities;
      world.records.push_back(std::move(r));

      switch (rng.below(5)) {
        case 0: if (gx + 1 < config.grid) ++gx; break;
        case 1: if (gx > 0) --gx; break;
        case 2: if (gy + 1 < config.grid) ++gy; break;
        case 3: if (gy > 0) --gy; break;
        default: break;  // stay
      }
    }
  }
  world.horizon = {t0, t0 + static_cast<std::int64_t>(config.time_steps) *
                           config.step_seconds};
  return world;
}

/// Full synthetic instance: world, matrix, costs, and products
/// whose demands target a per-product share `demand_ratio` of the total
/// supply (threshold = demand; budget from the payment rule).
struct GeneratedInstance {
  ProblemInstance instance;
  std::vector<double> cost_factors;
  std::vector<double> demand_factors;
  std::vector<double> budget_factors;
  double total_supply = 0.0;
};

inline GeneratedInstance generate_instance(const GeneratorConfig& config,
                                           double lambda_m, double demand_ratio) {
  SyntheticWorld world = generate_synthetic_trajectories(config);
  GeneratedInstance out;
  out.instance.universe =
      derive_slots(world.billboards, world.horizon, config.step_seconds);
  out.instance.matrix = build_influence_matrix(
      world.records, out.instance.universe, lambda_m, world.product_ids);

  auto costs = generate_costs(out.instance.matrix, config.seed);
  out.instance.costs = std::move(costs.costs);
  out.cost_factors = std::move(costs.factors);

  out.total_supply = total_supply(out.instance.matrix);
  auto demands = generate_demands(std::max(out.total_supply, 1e-9), demand_ratio,
                                  config.products, config.seed);
  auto budgets = generate_budgets(demands.demands, config.seed);
  out.demand_factors = std::move(demands.factors);
  out.budget_factors = std::move(budgets.factors);

  for (std::size_t j = 0; j < config.products; ++j) {
    ProductSpec p;
    p.product_id = world.product_ids[j];
    p.demand = demands.demands[j];
    p.threshold = demands.demands[j];
    p.budget = budgets.budgets[j];
    out.instance.products.push_back(std::move(p));
  }
  return out;
}

}  // namespace slotsel

#endif  // SLOTSEL_GENERATOR_HPP
