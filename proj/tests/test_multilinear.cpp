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
#include "slotsel/multilinear.hpp"

using namespace slotsel;
using namespace slotsel::testing;

namespace {

FractionalPoint point_of(const std::vector<double>& coords) {
  FractionalPoint x(coords.size());
  x.coords = coords;
  return x;
}

}  // namespace

TEST_CASE("F_exact is zero at the origin and rejects bad scales") {
  Rng rng(1);
  auto d = random_instance(rng, 4, 3, 1);
  auto m = to_matrix(d);
  CHECK(F_exact(m, FractionalPoint(4), 0, 1.0) == 0.0);
  CHECK_THROWS_AS(F_exact(m, FractionalPoint(4), 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(F_exact(m, FractionalPoint(4), 0, -2.0), std::invalid_argument);
}

TEST_CASE("F_exact agrees with the set function at every vertex") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = random_instance(rng, 5, 4, 2);
    auto m = to_matrix(d);
    const double scale = 1.0 + rng.uniform() * 3.0;
    for (std::uint32_t mask = 0; mask < (1u << 5); ++mask) {
      auto subset = bits_to_subset(mask);
      auto x = FractionalPoint::indicator(5, to_slotset(subset));
      const double expected = influence_oracle(d, subset, 0) / scale;
      CHECK(F_exact(m, x, 0, scale) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("F_exact matches full subset enumeration at interior points") {
  Rng rng(3);
  SUBCASE("uniform half on four slots, two users") {
    DenseInstance d;
    d.products = 1;
    d.probability = {{0.6, 0.1}, {0.3, 0.9}, {0.0, 0.5}, {0.8, 0.2}};
    d.affinities = {{0}, {0}};
    auto m = to_matrix(d);
    auto x = point_of({0.5, 0.5, 0.5, 0.5});
    CHECK(F_exact(m, x, 0, 1.0) ==
          doctest::Approx(multilinear_oracle(d, x.coords, 0, 1.0)).epsilon(1e-12));
  }
  SUBCASE("random instances and points") {
    for (int trial = 0; trial < 25; ++trial) {
      auto d = random_instance(rng, 5, 4, 2);
      auto m = to_matrix(d);
      std::vector<double> coords(5);
      for (auto& c : coords) c = rng.uniform();
      const std::uint32_t j = static_cast<std::uint32_t>(rng.below(2));
      const double scale = 0.5 + rng.uniform() * 2.0;
      CHECK(F_exact(m, point_of(coords), j, scale) ==
            doctest::Approx(multilinear_oracle(d, coords, j, scale))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("F_exact is monotone in every coordinate") {
  Rng rng(4);
  auto d = random_instance(rng, 6, 5, 1);
  auto m = to_matrix(d);
  std::vector<double> coords(6);
  for (auto& c : coords) c = rng.uniform() * 0.8;
  const double base = F_exact(m, point_of(coords), 0, 1.0);
  for (std::size_t s = 0; s < 6; ++s) {
    auto bumped = coords;
    bumped[s] = std::min(1.0, bumped[s] + 0.15);
    CHECK(F_exact(m, point_of(bumped), 0, 1.0) >= base - 1e-12);
  }
}

TEST_CASE("extension is submodular along the lattice") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = random_instance(rng, 5, 4, 1);
    auto m = to_matrix(d);
    std::vector<double> p(5), q(5);
    for (std::size_t i = 0; i < 5; ++i) {
      p[i] = rng.uniform();
      q[i] = rng.uniform();
    }
    std::vector<double> lo(5), hi(5);
    for (std::size_t i = 0; i < 5; ++i) {
      lo[i] = std::min(p[i], q[i]);
      hi[i] = std::max(p[i], q[i]);
    }
    const double fp = F_exact(m, point_of(p), 0, 1.0);
    const double fq = F_exact(m, point_of(q), 0, 1.0);
    const double fhi = F_exact(m, point_of(hi), 0, 1.0);
    const double flo = F_exact(m, point_of(lo), 0, 1.0);
    CHECK(fhi + flo <= fp + fq + 1e-9);
  }
}

TEST_CASE("F_mc is exact at vertices with zero stderr") {
  Rng rng(6);
  auto d = random_instance(rng, 5, 4, 1);
  auto m = to_matrix(d);
  SlotSet s({1, 3});
  auto x = FractionalPoint::indicator(5, s);
  auto est = F_mc(m, x, 0, 2.0, 200, 17);
  CHECK(est.estimate == doctest::Approx(product_influence(m, s, 0u) / 2.0));
  CHECK(est.stderr_ == 0.0);
}

TEST_CASE("F_mc with one sample is one realized set value") {
  DenseInstance d;
  d.products = 1;
  d.probability = {{1.0}, {1.0}};
  d.affinities = {{0}};
  auto m = to_matrix(d);
  auto est = F_mc(m, point_of({0.5, 0.5}), 0, 1.0, 1, 5);
  CHECK((est.estimate == 0.0 || est.estimate == 1.0));
  CHECK(est.stderr_ == 0.0);
  CHECK_THROWS_AS(F_mc(m, point_of({0.5, 0.5}), 0, 1.0, 0, 5),
                  std::invalid_argument);
}

TEST_CASE("F_mc concentrates around F_exact") {
  Rng rng(8);
  auto d = random_instance(rng, 6, 5, 2);
  auto m = to_matrix(d);
  std::vector<double> coords(6);
  for (auto& c : coords) c = rng.uniform();
  const auto x = point_of(coords);
  const double exact = F_exact(m, x, 0, 1.0);

  int hits = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    auto est = F_mc(m, x, 0, 1.0, 3000, 1000 + t);
    const double band = 4.0 * std::max(est.stderr_, 1e-12);
    hits += std::abs(est.estimate - exact) <= band;
  }
  CHECK(hits >= trials - 1);
}

TEST_CASE("F_mc is deterministic for a fixed seed") {
  Rng rng(9);
  auto d = random_instance(rng, 5, 4, 1);
  auto m = to_matrix(d);
  auto x = point_of({0.2, 0.9, 0.4, 0.0, 0.7});
  auto a = F_mc(m, x, 0, 1.0, 500, 33);
  auto b = F_mc(m, x, 0, 1.0, 500, 33);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("lifted_weight matches the two-term definition") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = random_instance(rng, 5, 4, 1);
    auto m = to_matrix(d);
    auto objective = Objective::single_product(m, 0, 1.0);
    std::vector<double> coords(5);
    for (auto& c : coords) c = rng.uniform();
    const auto y = point_of(coords);
    for (std::uint32_t e = 0; e < 5; ++e) {
      auto lifted = coords;
      lifted[e] = 1.0;
      const double expected = multilinear_oracle(d, lifted, 0, 1.0) -
                              multilinear_oracle(d, coords, 0, 1.0);
      CHECK(lifted_weight(y, e, objective) ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("lifted_weight corner cases") {
  DenseInstance d;
  d.products = 1;
  d.probability = {{0.4}, {0.6}};
  d.affinities = {{0}};
  auto m = to_matrix(d);
  auto objective = Objective::single_product(m, 0, 2.0);

  // e already saturated on y: no lift.
  CHECK(lifted_weight(point_of({1.0, 0.3}), 0, objective) == 0.0);
  // From the origin the lift is the normalized singleton influence.
  CHECK(lifted_weight(FractionalPoint(2), 1, objective) ==
        doctest::Approx(0.6 / 2.0));
}

TEST_CASE("aggregate objective sums normalized per-product extensions") {
  Rng rng(12);
  auto d = random_instance(rng, 5, 6, 3);
  auto m = to_matrix(d);
  std::vector<std::pair<std::uint32_t, double>> terms;
  for (std::uint32_t j = 0; j < 3; ++j) terms.emplace_back(j, 1.0 + j);
  auto aggregate = Objective::sum_normalized(m, terms);

  std::vector<double> coords(5);
  for (auto& c : coords) c = rng.uniform();
  const auto x = point_of(coords);
  double expected = 0.0;
  for (std::uint32_t j = 0; j < 3; ++j) {
    expected += F_exact(m, x, j, 1.0 + j);
  }
  CHECK(aggregate.value(x) == doctest::Approx(expected).epsilon(1e-12));
}
