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

#ifndef SLOTSEL_INSTANCE_HPP
#define SLOTSEL_INSTANCE_HPP

#include <cstdint>
#include <vector>

#include "slotsel/influence.hpp"
#include "slotsel/model.hpp"

namespace slotsel {

/// Everything a solver needs, immutable once assembled.
struct ProblemInstance {
  SlotUniverse universe;
  InfluenceMatrix matrix;
  CostTable costs;
  std::vector<ProductSpec> products;

  std::size_t slot_count() const { return matrix.slot_count(); }

  /// Matrix product index for each entry of `products`, in order.
  std::vector<std::uint32_t> product_indices() const {
    std::vector<std::uint32_t> idx;
    idx.reserve(products.size());
    for (const auto& p : products) idx.push_back(matrix.product_index(p.product_id));
    return idx;
  }

  double solution_cost(const SlotSet& s) const {
    double total = 0.0;
    for (SlotId slot : s) total += costs[slot];
    return total;
  }
};

}  // namespace slotsel

#endif  // SLOTSEL_INSTANCE_HPP
