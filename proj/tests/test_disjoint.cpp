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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "slotsel/disjoint.hpp"

using namespace slotsel;
using namespace slotsel::testing;

namespace {

// Two products A and B fighting over slot 0; slots 1..4 are fallbacks of
// different strengths and costs.  Demands 0.8, budgets 5.
ProblemInstance contention_instance() {
  DenseInstance d;
  d.products = 2;
  d.probability = {
      {0.9, 0.9},  // slot 0: strong for both
      {0.5, 0.0},  // slot 1: A only
      {0.0, 0.8},  // slot 2: B only
      {0.2, 0.2},  // slot 3: weak
      {0.9, 0.0},  // slot 4: strong for A, pricier
  };
  d.affinities = {{0}, {1}};
  return to_problem(d, {1.0, 2.0, 2.0, 4.0, 3.0},
                    {{"p1", 0.8, 0.0, 5.0}, {"p2", 0.8, 0.0, 5.0}});
}

PermutationSample make_perm(std::vector<std::uint32_t> products,
                            std::vector<std::uint32_t> slots) {
  PermutationSample p;
  p.product_order = std::move(products);
  p.slot_priority = std::move(slots);
  return p;
}

void check_outcome_invariants(const ProblemInstance& pi,
                              const AllocationOutcome& out) {
  // Pairwise disjoint.
  std::vector<char> seen(pi.slot_count(), 0);
  double recost = 0.0;
  for (const auto& set : out.sets) {
    for (SlotId s : set) {
      CHECK_FALSE(seen[s]);
      seen[s] = 1;
      recost += pi.costs[s];
    }
  }
  CHECK(out.cost == doctest::Approx(recost).epsilon(1e-12));
  CHECK(out.cost >= 0.0);
  CHECK(out.cost <= pi.costs.total() + 1e-12);
  // Budgets respected.
  for (std::size_t i = 0; i < pi.products.size(); ++i) {
    CHECK(pi.solution_cost(out.sets[i]) <= pi.products[i].budget + 1e-12);
  }
  // Demand certificates when feasible.
  if (out.feasible) {
    for (std::size_t i = 0; i < pi.products.size(); ++i) {
      const double attained = product_influence(
          pi.matrix, out.sets[i], pi.matrix.product_index(pi.products[i].product_id));
      CHECK(attained >= pi.products[i].demand - 1e-9);
      CHECK(attained == doctest::Approx(out.attained[i]).epsilon(1e-9));
    }
  }
}

}  // namespace

TEST_CASE("sample_size evaluates the Hoeffding bound") {
  CHECK(sample_size(0.1, 0.1, 100.0, 50.0) == 600);
  // ratio one: ceil(ln(2/delta) / (2 eps^2))
  CHECK(sample_size(0.1, 0.1, 80.0, 80.0) == 150);
  CHECK_THROWS_AS(sample_size(0.1, 0.1, 100.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_size(1.5, 0.1, 100.0, 50.0), std::invalid_argument);
}

TEST_CASE("sample_size is monotone in each argument") {
  const double eps[] = {0.05, 0.1, 0.2};
  for (double e1 : eps) {
    for (double e2 : eps) {
      if (e1 < e2) {
        CHECK(sample_size(0.1, e1, 100.0, 50.0) >= sample_size(0.1, e2, 100.0, 50.0));
      }
    }
  }
  CHECK(sample_size(0.1, 0.1, 100.0, 25.0) >= sample_size(0.1, 0.1, 100.0, 50.0));
  CHECK(sample_size(0.1, 0.1, 200.0, 50.0) >= sample_size(0.1, 0.1, 100.0, 50.0));
}

TEST_CASE("zero demands allocate nothing and are feasible") {
  auto pi = contention_instance();
  for (auto& p : pi.products) p.demand = 0.0;
  auto out = run_one_permutation(pi.matrix, pi.costs, pi.products,
                                 make_perm({0, 1}, {0, 1, 2, 3, 4}));
  CHECK(out.feasible);
  CHECK(out.cost == 0.0);
  for (const auto& s : out.sets) CHECK(s.empty());
}

TEST_CASE("a product priced out of every slot is infeasible") {
  auto pi = contention_instance();
  pi.products[0].budget = 0.5;  // below the cheapest slot
  auto out = run_one_permutation(pi.matrix, pi.costs, pi.products,
                                 make_perm({0, 1}, {0, 1, 2, 3, 4}));
  CHECK_FALSE(out.feasible);
  CHECK(out.sets[0].empty());
}

TEST_CASE("greedy allocation follows the hand trace for both product orders") {
  auto pi = contention_instance();
  const auto identity = std::vector<std::uint32_t>{0, 1, 2, 3, 4};

  SUBCASE("A first: A takes slot 0, B falls back to slot 2") {
    auto out = run_one_permutation(pi.matrix, pi.costs, pi.products,
                                   make_perm({0, 1}, identity));
    CHECK(out.feasible);
    CHECK(out.sets[0].members() == std::vector<SlotId>{0});
    CHECK(out.sets[1].members() == std::vector<SlotId>{2});
    CHECK(out.cost == doctest::Approx(3.0));
    CHECK(out.residual_budgets[0] == doctest::Approx(4.0));
    CHECK(out.residual_budgets[1] == doctest::Approx(3.0));
  }
  SUBCASE("B first: B takes slot 0, A falls back to slot 4") {
    auto out = run_one_permutation(pi.matrix, pi.costs, pi.products,
                                   make_perm({1, 0}, identity));
    CHECK(out.feasible);
    CHECK(out.sets[1].members() == std::vector<SlotId>{0});
    CHECK(out.sets[0].members() == std::vector<SlotId>{4});
    CHECK(out.cost == doctest::Approx(4.0));
  }
  SUBCASE("slot priority breaks the 0-vs-4 tie for A") {
    auto out = run_one_permutation(pi.matrix, pi.costs, pi.products,
                                   make_perm({0, 1}, {4, 3, 2, 1, 0}));
    CHECK(out.feasible);
    CHECK(out.sets[0].members() == std::vector<SlotId>{4});
    CHECK(out.sets[1].members() == std::vector<SlotId>{0});
    CHECK(out.cost == doctest::Approx(4.0));
  }
}

TEST_CASE("four-slot hand trace: product order changes the cost") {
  DenseInstance d;
  d.products = 2;
  d.probability = {
      {0.9, 0.9},  // slot 0: strong for both, cheapest
      {0.5, 0.0},  // slot 1: A only, weak
      {0.0, 0.8},  // slot 2: B only
      {0.9, 0.0},  // slot 3: strong for A, pricier
  };
  d.affinities = {{0}, {1}};
  auto pi = to_problem(d, {1.0, 2.0, 2.0, 3.0},
                       {{"p1", 0.8, 0.0, 5.0}, {"p2", 0.8, 0.0, 5.0}});
  const auto identity = std::vector<std::uint32_t>{0, 1, 2, 3};

  // A first: A takes slot 0 (gain 0.9, met), B takes slot 2: cost 3.
  auto ab = run_one_permutation(pi.matrix, pi.costs, pi.products,
                                make_perm({0, 1}, identity));
  CHECK(ab.feasible);
  CHECK(ab.sets[0].members() == std::vector<SlotId>{0});
  CHECK(ab.sets[1].members() == std::vector<SlotId>{2});
  CHECK(ab.cost == doctest::Approx(3.0));

  // B first: B takes slot 0, A must fall back to slot 3: cost 4.
  auto ba = run_one_permutation(pi.matrix, pi.costs, pi.products,
                                make_perm({1, 0}, identity));
  CHECK(ba.feasible);
  CHECK(ba.sets[1].members() == std::vector<SlotId>{0});
  CHECK(ba.sets[0].members() == std::vector<SlotId>{3});
  CHECK(ba.cost == doctest::Approx(4.0));
}

TEST_CASE("constant-objective instance: every sample returns the same cost") {
  // Each product is reachable only through its own slot; every permutation
  // must allocate exactly those two slots.
  DenseInstance d;
  d.products = 2;
  d.probability = {{0.9, 0.0}, {0.0, 0.9}};
  d.affinities = {{0}, {1}};
  auto pi = to_problem(d, {3.0, 3.0}, {{"p1", 0.5, 0, 9}, {"p2", 0.5, 0, 9}});

  DisjointConfig config;
  config.seed = 2;
  config.max_samples = 16;
  auto result = solve_disjoint(pi, config);
  REQUIRE(result.stats.best_cost.has_value());
  CHECK(*result.stats.best_cost == doctest::Approx(6.0));
  for (const auto& rec : result.history) {
    CHECK(rec.feasible);
    CHECK(rec.cost == doctest::Approx(6.0));
  }
}

TEST_CASE("ratio greedy prefers cheap gain per cost") {
  // Slot 1 has less gain than slot 0 but four times the gain per unit cost.
  DenseInstance d;
  d.products = 1;
  d.probability = {{0.8}, {0.4}};
  d.affinities = {{0}};
  auto pi = to_problem(d, {8.0, 1.0}, {{"p1", 0.3, 0.0, 10.0}});
  const auto perm = make_perm({0}, {0, 1});
  auto pure = run_one_permutation(pi.matrix, pi.costs, pi.products, perm,
                                  GreedyRule::PureGain);
  CHECK(pure.sets[0].members() == std::vector<SlotId>{0});
  auto ratio = run_one_permutation(pi.matrix, pi.costs, pi.products, perm,
                                   GreedyRule::GainPerCost);
  CHECK(ratio.sets[0].members() == std::vector<SlotId>{1});
}

TEST_CASE("exhaustive enumeration finds the cheapest permutation outcome") {
  Rng rng(51);
  auto d = random_instance(rng, 3, 4, 2);
  std::vector<std::uint32_t> ground{0, 1, 2};
  std::vector<ProductSpec> products;
  for (std::uint32_t j = 0; j < 2; ++j) {
    const double supply = influence_oracle(d, ground, static_cast<std::int32_t>(j));
    products.push_back({"p" + std::to_string(j + 1), 0.4 * supply, 0.0, 50.0});
  }
  auto pi = to_problem(d, random_costs(rng, 3), products);

  auto exhaustive = solve_disjoint_exhaustive(pi);
  CHECK(exhaustive.history.size() == 12);  // 2! * 3!

  double min_cost = std::numeric_limits<double>::infinity();
  for (const auto& rec : exhaustive.history) {
    if (rec.feasible) min_cost = std::min(min_cost, rec.cost);
  }
  if (exhaustive.stats.best_cost) {
    CHECK(*exhaustive.stats.best_cost == doctest::Approx(min_cost));
    CHECK(exhaustive.best.cost == doctest::Approx(min_cost));

    DisjointConfig config;
    config.seed = 4;
    config.max_samples = 40;
    auto sampled = solve_disjoint(pi, config);
    REQUIRE(sampled.stats.best_cost.has_value());
    CHECK(*sampled.stats.best_cost >= min_cost - 1e-12);
  }
}

TEST_CASE("exhaustive enumeration is gated") {
  Rng rng(52);
  auto d = random_instance(rng, 12, 3, 2);
  auto pi = to_problem(d, random_costs(rng, 12),
                       {{"p1", 0.1, 0, 10}, {"p2", 0.1, 0, 10}});
  CHECK_THROWS_AS(solve_disjoint_exhaustive(pi), std::invalid_argument);
}

TEST_CASE("demand beyond supply yields the infeasible marker") {
  auto pi = contention_instance();
  pi.products[0].demand = 50.0;  // only one relevant user exists
  DisjointConfig config;
  config.max_samples = 16;
  auto result = solve_disjoint(pi, config);
  CHECK_FALSE(result.best.feasible);
  CHECK(result.stats.feasible_count == 0);
  CHECK_FALSE(result.stats.best_cost.has_value());
  CHECK(result.stats.pilot_fallback);
  CHECK(result.stats.requested_samples == 16);
}

TEST_CASE("sampled outcomes satisfy the structural invariants") {
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = random_instance(rng, 6, 6, 3);
    std::vector<std::uint32_t> ground{0, 1, 2, 3, 4, 5};
    std::vector<ProductSpec> products;
    for (std::uint32_t j = 0; j < 3; ++j) {
      const double supply = influence_oracle(d, ground, static_cast<std::int32_t>(j));
      products.push_back({"p" + std::to_string(j + 1),
                          rng.uniform() * 0.5 * supply, 0.0,
                          5.0 + rng.uniform() * 20.0});
    }
    auto pi = to_problem(d, random_costs(rng, 6), products);
    for (std::uint64_t i = 0; i < 25; ++i) {
      auto perm = PermutationSample::random(3, 6, mix_seed(trial, i));
      auto out = run_one_permutation(pi.matrix, pi.costs, pi.products, perm);
      check_outcome_invariants(pi, out);
    }
  }
}

TEST_CASE("running best cost is non-increasing over the sample stream") {
  auto pi = contention_instance();
  DisjointConfig config;
  config.seed = 8;
  config.max_samples = 64;
  auto result = solve_disjoint(pi, config);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rec : result.history) {
    if (rec.feasible) {
      CHECK(rec.cost >= 0.0);
      best = std::min(best, rec.cost);
    }
  }
  if (result.stats.best_cost) CHECK(best == doctest::Approx(*result.stats.best_cost));
}

TEST_CASE("solve_disjoint is deterministic for a fixed seed") {
  auto pi = contention_instance();
  DisjointConfig config;
  config.seed = 12;
  config.max_samples = 32;
  auto a = solve_disjoint(pi, config);
  auto b = solve_disjoint(pi, config);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].cost == b.history[i].cost);
    CHECK(a.history[i].feasible == b.history[i].feasible);
  }
  for (std::size_t i = 0; i < a.best.sets.size(); ++i) {
    CHECK(a.best.sets[i].members() == b.best.sets[i].members());
  }
}

TEST_CASE("results are identical for any worker count") {
  Rng rng(54);
  auto d = random_instance(rng, 6, 6, 3);
  auto pi = to_problem(d, random_costs(rng, 6),
                       {{"p1", 0.6, 0, 12}, {"p2", 0.4, 0, 12}, {"p3", 0.5, 0, 12}});
  DisjointConfig config;
  config.seed = 21;
  config.max_samples = 48;
  auto serial = solve_disjoint(pi, config);
  config.workers = 4;
  auto parallel = solve_disjoint(pi, config);

  REQUIRE(serial.history.size() == parallel.history.size());
  for (std::size_t i = 0; i < serial.history.size(); ++i) {
    CHECK(serial.history[i].feasible == parallel.history[i].feasible);
    CHECK(serial.history[i].cost == parallel.history[i].cost);
  }
  CHECK(serial.best.cost == parallel.best.cost);
  for (std::size_t i = 0; i < serial.best.sets.size(); ++i) {
    CHECK(serial.best.sets[i].members() == parallel.best.sets[i].members());
  }
  CHECK(serial.stats.feasible_count == parallel.stats.feasible_count);
}

TEST_CASE("pilot phase sizes the full run via the Hoeffding bound") {
  auto pi = contention_instance();
  DisjointConfig config;
  config.seed = 3;
  config.max_samples = 2048;
  config.pilot_fraction = 0.01;  // ceil(0.01 * 2048) = 21 pilot samples
  auto result = solve_disjoint(pi, config);
  CHECK(result.stats.requested_samples >= 21);
  CHECK(result.stats.requested_samples <= 2048);
  REQUIRE(result.stats.best_cost.has_value());
  CHECK(*result.stats.best_cost <= result.stats.cost_upper_bound);
}
