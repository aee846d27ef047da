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

#ifndef SLOTSEL_BASELINES_HPP
#define SLOTSEL_BASELINES_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "slotsel/disjoint.hpp"
#include "slotsel/instance.hpp"
#include "slotsel/rng.hpp"

namespace slotsel {

/// Random Allocation baseline: products in input order, each drawing
/// unallocated slots uniformly at random and keeping a draw only when it is
/// affordable, until its demand is met or no affordable slot remains.
inline AllocationOutcome random_allocation(const InfluenceMatrix& matrix,
                                           const CostTable& costs,
                                           const std::vector<ProductSpec>& products,
                                           std::uint64_t seed) {
  const std::size_t l = products.size();
  const std::size_t n = matrix.slot_count();
  AllocationOutcome out;
  out.sets.assign(l, SlotSet{});
  out.residual_budgets.assign(l, 0.0);
  out.attained.assign(l, 0.0);

  Rng rng(seed);
  std::vector<char> allocated(n, 0);
  out.feasible = true;
  for (std::size_t i = 0; i < l; ++i) {
    const auto& product = products[i];
    product.validate();
    const std::uint32_t j = matrix.product_index(product.product_id);
    SurvivalCache cache(matrix, j);
    out.residual_budgets[i] = product.budget;

    auto draw_order = random_permutation(n, rng);
    for (SlotId s : draw_order) {
      if (cache.value() >= product.demand) break;
      if (allocated[s] || costs[s] > out.residual_budgets[i]) continue;
      allocated[s] = 1;
      out.sets[i].add(s);
      out.residual_budgets[i] -= costs[s];
      out.cost += costs[s];
      cache.add(s);
    }
    out.attained[i] = cache.value();
    // Unlike the sampled greedy, an unmet product only clears the flag;
    // the remaining products still get their draws.
    out.feasible = out.feasible && cache.value() >= product.demand;
  }
  return out;
}

/// Slot order used by the Top-k baseline: global singleton influence
/// descending, ties to the lower slot id.
inline std::vector<SlotId> topk_order(const InfluenceMatrix& matrix) {
  const std::size_t n = matrix.slot_count();
  std::vector<double> value(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) value[s] = singleton_influence(matrix, static_cast<SlotId>(s));
  std::vector<SlotId> order(n);
  for (std::size_t s = 0; s < n; ++s) order[s] = static_cast<SlotId>(s);
  std::sort(order.begin(), order.end(), [&](SlotId a, SlotId b) {
    if (value[a] != value[b]) return value[a] > value[b];
    return a < b;
  });
  return order;
}

/// Top-k baseline: one scan of the slots sorted by singleton influence;
/// each affordable slot goes to the current product, and the scan advances
/// to the next product once a demand is met.  Deterministic.
inline AllocationOutcome topk_allocation(const InfluenceMatrix& matrix,
                                         const CostTable& costs,
                                         const std::vector<ProductSpec>& products) {
  const std::size_t l = products.size();
  AllocationOutcome out;
  out.sets.assign(l, SlotSet{});
  out.residual_budgets.assign(l, 0.0);
  out.attained.assign(l, 0.0);

  std::vector<SurvivalCache> caches;
  caches.reserve(l);
  for (std::size_t i = 0; i < l; ++i) {
    products[i].validate();
    caches.emplace_back(matrix, matrix.product_index(products[i].product_id));
    out.residual_budgets[i] = products[i].budget;
  }

  std::size_t cur = 0;
  auto met = [&](std::size_t i) { return caches[i].value() >= products[i].demand; };
  while (cur < l && met(cur)) ++cur;

  for (SlotId s : topk_order(matrix)) {
    if (cur >= l) break;
    if (costs[s] > out.residual_budgets[cur]) continue;
    out.sets[cur].add(s);
    out.residual_budgets[cur] -= costs[s];
    out.cost += costs[s];
    caches[cur].add(s);
    while (cur < l && met(cur)) ++cur;
  }

  out.feasible = true;
  for (std::size_t i = 0; i < l; ++i) {
    out.attained[i] = caches[i].value();
    out.feasible = out.feasible && met(i);
  }
  return out;
}

}  // namespace slotsel

#endif  // SLOTSEL_BASELINES_HPP
