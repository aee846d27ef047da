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

#ifndef SLOTSEL_INFLUENCE_HPP
#define SLOTSEL_INFLUENCE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "slotsel/geo.hpp"
#include "slotsel/model.hpp"

namespace slotsel {

/// A subset of the slot universe; members kept sorted and unique so every
/// iteration order is deterministic.
class SlotSet {
 public:
  SlotSet() = default;

  explicit SlotSet(std::vector<SlotId> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()),
                   members_.end());
  }

  bool contains(SlotId s) const {
    return std::binary_search(members_.begin(), members_.end(), s);
  }

  /// Returns false if already present.
  bool add(SlotId s) {
    auto it = std::lower_bound(members_.begin(), members_.end(), s);
    if (it != members_.end() && *it == s) return false;
    members_.insert(it, s);
    return true;
  }

  void merge(const SlotSet& other) {
    std::vector<SlotId> out;
    out.reserve(members_.size() + other.members_.size());
    std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                   other.members_.end(), std::back_inserter(out));
    members_ = std::move(out);
  }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<SlotId>& members() const { return members_; }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  std::vector<SlotId> members_;
};

/// Sparse slot -> (user, probability) map.  Zero probabilities are never
/// stored; probabilities are billboard-size ratios in (0, 1].  Also keeps
/// the user and product registries so product-specific evaluations know
/// which users are relevant to which product.
struct InfluenceMatrix {
  struct Entry {
    std::uint32_t user;
    double probability;
  };

  std::vector<std::vector<Entry>> entries;  // indexed by slot id
  std::vector<std::string> users;           // dense user index -> id
  std::vector<std::vector<std::uint32_t>> user_affinities;  // sorted per user
  std::vector<std::string> products;        // dense product index -> id
  std::vector<std::vector<std::uint32_t>> product_users;  // U_j, sorted
  double max_size = 0.0;

  std::size_t slot_count() const { return entries.size(); }
  std::size_t user_count() const { return users.size(); }
  std::size_t product_count() const { return products.size(); }

  std::uint32_t product_index(const std::string& product_id) const {
    for (std::uint32_t j = 0; j < products.size(); ++j) {
      if (products[j] == product_id) return j;
    }
    throw std::invalid_argument("unknown product: " + product_id);
  }

  bool user_has_affinity(std::uint32_t user, std::uint32_t product) const {
    const auto& a = user_affinities[user];
    return std::binary_search(a.begin(), a.end(), product);
  }
};

/// Builds the influence matrix from trajectories.  An entry (s, u) exists
/// iff some record of u overlaps s's window in time and lies within
/// lambda_m meters of s's billboard; its probability is the billboard-size
/// ratio size(b_s) / max size.
///
/// `product_ids` fixes the product registry; when empty the products are
/// inferred (sorted, unique) from the records' affinity lists.
inline InfluenceMatrix build_influence_matrix(
    const std::vector<TrajectoryRecord>& records, const SlotUniverse& universe,
    double lambda_m, std::vector<std::string> product_ids = {}) {
  if (universe.slots.empty()) {
    throw std::invalid_argument("cannot build influence matrix over an empty "
                                "slot universe");
  }
  if (!(lambda_m > 0.0)) {
    throw std::invalid_argument("influence radius must be positive");
  }

  InfluenceMatrix m;
  m.entries.assign(universe.slots.size(), {});

  if (product_ids.empty()) {
    std::set<std::string> seen;
    for (const auto& r : records) seen.insert(r.affinities.begin(), r.affinities.end());
    product_ids.assign(seen.begin(), seen.end());
  }
  m.products = std::move(product_ids);
  std::map<std::string, std::uint32_t> product_of;
  for (std::uint32_t j = 0; j < m.products.size(); ++j) {
    if (!product_of.emplace(m.products[j], j).second) {
      throw std::invalid_argument("duplicate product id: " + m.products[j]);
    }
  }

  std::map<std::string, std::uint32_t> user_of;
  std::vector<std::vector<std::uint32_t>> records_of_user;
  for (const auto& r : records) {
    auto [it, inserted] = user_of.emplace(r.user, static_cast<std::uint32_t>(m.users.size()));
    if (inserted) {
      m.users.push_back(r.user);
      m.user_affinities.emplace_back();
    }
    auto& aff = m.user_affinities[it->second];
    for (const auto& p : r.affinities) {
      auto pit = product_of.find(p);
      if (pit == product_of.end()) {
        throw std::invalid_argument("record of user " + r.user +
                                    " references unknown product " + p);
      }
      aff.push_back(pit->second);
    }
  }
  for (auto& aff : m.user_affinities) {
    std::sort(aff.begin(), aff.end());
    aff.erase(std::unique(aff.begin(), aff.end()), aff.end());
  }

  m.product_users.assign(m.products.size(), {});
  for (std::uint32_t u = 0; u < m.users.size(); ++u) {
    for (auto j : m.user_affinities[u]) m.product_users[j].push_back(u);
  }

  for (const auto& b : universe.billboards) m.max_size = std::max(m.max_size, b.size);
  if (!(m.max_size > 0.0)) {
    throw std::invalid_argument("all billboard sizes are non-positive");
  }

  // Two records of the same user may overlap the same slot; the probability
  // is the same size ratio either way, so duplicates are dropped afterwards.
  for (const auto& r : records) {
    const std::uint32_t u = user_of.at(r.user);
    for (const auto& slot : universe.slots) {
      if (!slot.interval.overlaps(r.interval)) continue;
      const auto& bb = universe.billboards[slot.billboard];
      if (haversine_m(r.lat, r.lon, bb.lat, bb.lon) > lambda_m) continue;
      m.entries[slot.slot_id].push_back({u, bb.size / m.max_size});
    }
  }
  for (auto& col : m.entries) {
    std::sort(col.begin(), col.end(),
              [](const InfluenceMatrix::Entry& a, const InfluenceMatrix::Entry& b) {
                return a.user < b.user;
              });
    col.erase(std::unique(col.begin(), col.end(),
                          [](const InfluenceMatrix::Entry& a,
                             const InfluenceMatrix::Entry& b) {
                            return a.user == b.user;
                          }),
              col.end());
  }
  return m;
}

namespace detail {

// Shared survival scratch: survival[u] = prod over chosen slots of
// (1 - Pr(s,u)); influence = sum over touched users of 1 - survival.
template <class Filter>
double coverage_value(const InfluenceMatrix& m, const SlotSet& s, Filter keep) {
  std::vector<double> survival;
  std::vector<std::uint32_t> touched;
  survival.assign(m.user_count(), 1.0);
  for (SlotId slot : s) {
    for (const auto& e : m.entries.at(slot)) {
      if (!keep(e.user)) continue;
      if (survival[e.user] == 1.0) touched.push_back(e.user);
      survival[e.user] *= 1.0 - e.probability;
    }
  }
  double total = 0.0;
  for (auto u : touched) total += 1.0 - survival[u];
  return total;
}

}  // namespace detail

/// Expected number of trajectories influenced by S (coverage form).
inline double influence(const InfluenceMatrix& m, const SlotSet& s) {
  return detail::coverage_value(m, s, [](std::uint32_t) { return true; });
}

/// Influence of S restricted to the users relevant to one product.
inline double product_influence(const InfluenceMatrix& m, const SlotSet& s,
                                std::uint32_t product) {
  if (product >= m.product_count()) {
    throw std::invalid_argument("unknown product index " +
                                std::to_string(product));
  }
  return detail::coverage_value(
      m, s, [&](std::uint32_t u) { return m.user_has_affinity(u, product); });
}

inline double product_influence(const InfluenceMatrix& m, const SlotSet& s,
                                const std::string& product_id) {
  return product_influence(m, s, m.product_index(product_id));
}

/// Incremental product-specific evaluation for greedy loops: keeps the
/// per-user survival products of a growing set so each marginal gain costs
/// O(deg(e)) instead of a from-scratch pass.
class SurvivalCache {
 public:
  SurvivalCache(const InfluenceMatrix& m, std::uint32_t product)
      : matrix_(&m), product_(product), survival_(m.user_count(), 1.0) {
    if (product >= m.product_count()) {
      throw std::invalid_argument("unknown product index " +
                                  std::to_string(product));
    }
  }

  double value() const { return value_; }

  /// I_j(S + e) - I_j(S) without mutating the cache.
  double gain(SlotId e) const {
    double g = 0.0;
    for (const auto& entry : matrix_->entries.at(e)) {
      if (!matrix_->user_has_affinity(entry.user, product_)) continue;
      g += survival_[entry.user] * entry.probability;
    }
    return g;
  }

  void add(SlotId e) {
    for (const auto& entry : matrix_->entries.at(e)) {
      if (!matrix_->user_has_affinity(entry.user, product_)) continue;
      value_ += survival_[entry.user] * entry.probability;
      survival_[entry.user] *= 1.0 - entry.probability;
    }
  }

 private:
  const InfluenceMatrix* matrix_;
  std::uint32_t product_;
  std::vector<double> survival_;
  double value_ = 0.0;
};

/// Marginal gain I_j(S + e) - I_j(S); e must not already be in S.
inline double marginal_gain(const InfluenceMatrix& m, const SlotSet& s,
                            SlotId e, std::uint32_t product) {
  if (s.contains(e)) {
    throw std::invalid_argument("slot " + std::to_string(e) +
                                " is already in the set");
  }
  SurvivalCache cache(m, product);
  for (SlotId slot : s) cache.add(slot);
  return cache.gain(e);
}

/// sigma* = sum over slots of the singleton influence; single-slot
/// influence is linear, so this equals the sum of all stored probabilities.
inline double total_supply(const InfluenceMatrix& m) {
  double total = 0.0;
  for (const auto& col : m.entries) {
    for (const auto& e : col) total += e.probability;
  }
  return total;
}

inline double singleton_influence(const InfluenceMatrix& m, SlotId s) {
  double total = 0.0;
  for (const auto& e : m.entries.at(s)) total += e.probability;
  return total;
}

/// Instance sparsity r: the largest number of products any single slot
/// touches through its stored users.  0 for an entry-less matrix.
inline std::uint32_t sparsity(const InfluenceMatrix& m) {
  std::uint32_t r = 0;
  std::vector<char> seen(m.product_count(), 0);
  for (const auto& col : m.entries) {
    std::fill(seen.begin(), seen.end(), 0);
    std::uint32_t count = 0;
    for (const auto& e : col) {
      for (auto j : m.user_affinities[e.user]) {
        if (!seen[j]) {
          seen[j] = 1;
          ++count;
        }
      }
    }
    r = std::max(r, count);
  }
  return r;
}

/// Instance consistency checks; valid iff the report is empty.
inline ValidationReport validate_instance(
    const SlotUniverse& universe, const CostTable& costs,
    const std::vector<ProductSpec>& products,
    const InfluenceMatrix* matrix = nullptr) {
  ValidationReport report;
  using Sev = ValidationFinding::Severity;

  std::set<SlotId> ids;
  for (const auto& s : universe.slots) {
    if (!ids.insert(s.slot_id).second) {
      report.add(Sev::Error,
                 "duplicate slot id " + std::to_string(s.slot_id));
    }
  }
  if (costs.size() < universe.slots.size()) {
    for (std::size_t s = costs.size(); s < universe.slots.size(); ++s) {
      report.add(Sev::Error, "slot " + std::to_string(s) + " has no cost");
    }
  }
  for (const auto& p : products) {
    if (p.demand < 0 || p.threshold < 0 || p.budget < 0) {
      report.add(Sev::Error, "product " + p.product_id +
                                 " has a negative demand, threshold or budget");
    }
    if (matrix != nullptr) {
      bool known = false;
      for (const auto& id : matrix->products) known |= (id == p.product_id);
      if (!known) {
        report.add(Sev::Error, "product " + p.product_id +
                                   " is absent from the influence matrix");
      } else if (matrix->product_users[matrix->product_index(p.product_id)]
                     .empty() &&
                 (p.demand > 0 || p.threshold > 0)) {
        report.add(Sev::Warning,
                   "product " + p.product_id +
                       " has positive demand but no relevant users; it can "
                       "never be satisfied");
      }
    }
  }
  return report;
}

}  // namespace slotsel

#endif  // SLOTSEL_INFLUENCE_HPP
