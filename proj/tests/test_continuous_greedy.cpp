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
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "slotsel/continuous_greedy.hpp"

using namespace slotsel;
using namespace slotsel::testing;

TEST_CASE("lp_direction under a cardinality cap picks the top weights") {
  auto x = lp_direction({5.0, 3.0, 1.0}, Polytope::cardinality(2));
  CHECK(x.coords == std::vector<double>{1.0, 1.0, 0.0});
}

TEST_CASE("lp_direction solves the fractional knapsack by ratio") {
  auto x = lp_direction({3.0, 2.0, 1.0},
                        Polytope::knapsack({4.0, 4.0, 4.0}, 10.0));
  REQUIRE(x.coords.size() == 3);
  CHECK(x.coords[0] == doctest::Approx(1.0));
  CHECK(x.coords[1] == doctest::Approx(1.0));
  CHECK(x.coords[2] == doctest::Approx(0.5));
}

TEST_CASE("lp_direction stays fractional when one item exceeds the budget") {
  auto x = lp_direction({9.0, 1.0}, Polytope::knapsack({5.0, 1.0}, 2.0));
  CHECK(x.coords[0] == doctest::Approx(0.4));  // 2/5 of the best ratio item
  CHECK(x.coords[1] == doctest::Approx(0.0));
}

TEST_CASE("lp_direction with all-zero weights returns the zero vector") {
  auto card = lp_direction({0.0, 0.0}, Polytope::cardinality(2));
  CHECK(card.support() == 0);
  auto knap = lp_direction({0.0, 0.0}, Polytope::knapsack({1.0, 1.0}, 5.0));
  CHECK(knap.support() == 0);
}

TEST_CASE("lp_direction breaks ties toward the lower slot id") {
  auto x = lp_direction({2.0, 2.0, 2.0}, Polytope::cardinality(1));
  CHECK(x.coords == std::vector<double>{1.0, 0.0, 0.0});
}

TEST_CASE("single-slot ascent follows the damped update toward 1 - 1/e") {
  DenseInstance d;
  d.products = 1;
  d.probability = {{1.0}};
  d.affinities = {{0}};
  auto m = to_matrix(d);
  auto objective = Objective::single_product(m, 0, 1.0);

  auto result = continuous_greedy(objective, Polytope::cardinality(1), 1.0,
                                  1.0 / 1000.0);
  // Discrete ascent gives y(1) = 1 - (1 - step)^steps, slightly above 1-1/e.
  const double expected = 1.0 - std::pow(1.0 - 1e-3, 1000);
  CHECK(result.point.coords[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(result.point.coords[0] >= 1.0 - std::exp(-1.0));
  const double value = objective.value(result.point);
  CHECK(value >= 1.0 - std::exp(-1.0) - 0.05);
}

TEST_CASE("zero objective leaves a flat trace") {
  InfluenceMatrix m;
  m.entries.assign(3, {});
  m.users = {"u1"};
  m.user_affinities = {{0}};
  m.products = {"p1"};
  m.product_users = {{}};
  auto objective = Objective(m, {0.0});
  auto result = continuous_greedy(objective, Polytope::cardinality(2), 1.0, 0.25);
  for (const auto& step : result.trace.steps) CHECK(step.value == 0.0);
}

TEST_CASE("coordinates stay inside the unit cube and F ascends") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = random_instance(rng, 6, 5, 2);
    auto m = to_matrix(d);
    std::vector<std::pair<std::uint32_t, double>> terms;
    for (std::uint32_t j = 0; j < 2; ++j) {
      terms.emplace_back(j, std::max(1e-9, influence_oracle(
                                               d, {0, 1, 2, 3, 4, 5}, j)));
    }
    auto objective = Objective::sum_normalized(m, terms);
    auto result =
        continuous_greedy(objective, Polytope::cardinality(2), 1.0, 0.05);
    for (double y : result.point.coords) {
      CHECK(y >= 0.0);
      CHECK(y <= 1.0);
    }
    for (std::size_t i = 1; i < result.trace.steps.size(); ++i) {
      CHECK(result.trace.steps[i].value >=
            result.trace.steps[i - 1].value - 1e-9);
      CHECK(result.trace.steps[i].t > result.trace.steps[i - 1].t);
    }
  }
}

TEST_CASE("ascent reaches the 1-1/e envelope against brute-forced optima") {
  Rng rng(22);
  int passes = 0;
  const int trials = 25;
  for (int trial = 0; trial < trials; ++trial) {
    auto d = random_instance(rng, 6, 5, 1);
    auto m = to_matrix(d);
    const double supply = influence_oracle(d, {0, 1, 2, 3, 4, 5}, 0);
    if (supply <= 0.0) {
      ++passes;
      continue;
    }
    auto objective = Objective::single_product(m, 0, supply);
    auto result = continuous_greedy(objective, Polytope::cardinality(2), 1.0,
                                    default_step_size(6, 1.0));
    const double opt = best_capped_value_oracle(d, 2, 0) / supply;
    const double achieved = objective.value(result.point);
    if (achieved >= (1.0 - std::exp(-1.0) - 0.05) * opt) ++passes;
  }
  CHECK(passes == trials);
}

TEST_CASE("knapsack-constrained ascent respects the budget in expectation") {
  Rng rng(23);
  auto d = random_instance(rng, 6, 5, 1);
  auto m = to_matrix(d);
  auto costs = random_costs(rng, 6);
  auto objective = Objective::single_product(m, 0, 1.0);
  auto result = continuous_greedy(objective, Polytope::knapsack(costs, 8.0),
                                  1.0, 0.02);
  double fractional_cost = 0.0;
  for (std::size_t s = 0; s < 6; ++s) {
    fractional_cost += result.point.coords[s] * costs[s];
  }
  CHECK(fractional_cost <= 8.0 + 1e-9);
}

TEST_CASE("step size must divide the horizon") {
  DenseInstance d;
  d.products = 1;
  d.probability = {{0.5}};
  d.affinities = {{0}};
  auto m = to_matrix(d);
  auto objective = Objective::single_product(m, 0, 1.0);
  CHECK_THROWS_AS(
      continuous_greedy(objective, Polytope::cardinality(1), 1.0, 0.3),
      std::invalid_argument);
}

TEST_CASE("step helpers produce exact divisors") {
  CHECK(default_step_size(6, 1.0) == doctest::Approx(1.0 / 60.0));
  CHECK(analysis_step_size(2, 1.0) == doctest::Approx(1.0 / 32.0));
  const double s = default_step_size(1000, 1.0);
  const double k = 1.0 / s;
  CHECK(k == doctest::Approx(std::round(k)));
}

TEST_CASE("trace dumps to t,F,support") {
  DenseInstance d;
  d.products = 1;
  d.probability = {{0.9}};
  d.affinities = {{0}};
  auto m = to_matrix(d);
  auto objective = Objective::single_product(m, 0, 1.0);
  auto result = continuous_greedy(objective, Polytope::cardinality(1), 1.0, 0.5);

  const auto path =
      (std::filesystem::temp_directory_path() / "slotsel_trace.csv").string();
  result.trace.dump(path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,F,support");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) rows += !line.empty();
  CHECK(rows == result.trace.steps.size());
  std::remove(path.c_str());
}
