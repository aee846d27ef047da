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

#ifndef SLOTSEL_DISJOINT_HPP
#define SLOTSEL_DISJOINT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "slotsel/instance.hpp"
#include "slotsel/rng.hpp"

namespace slotsel {

/// One (product order, slot priority) pair steering a greedy allocation
/// run.  The slot priority only matters through tie-breaking: equal-gain
/// candidates go to the slot appearing earlier in it.
struct PermutationSample {
  std::vector<std::uint32_t> product_order;  // permutation of [0, l)
  std::vector<std::uint32_t> slot_priority;  // permutation of [0, n)
  std::uint64_t seed = 0;

  static PermutationSample random(std::size_t products, std::size_t slots,
                                  std::uint64_t seed) {
    PermutationSample p;
    p.seed = seed;
    Rng rng(seed);
    p.product_order = random_permutation(products, rng);
    p.slot_priority = random_permutation(slots, rng);
    return p;
  }
};

/// Disjoint per-product slot sets plus the bookkeeping of one greedy run.
struct AllocationOutcome {
  std::vector<SlotSet> sets;              // by input product position
  bool feasible = false;
  double cost = 0.0;
  std::vector<double> residual_budgets;   // by input product position
  std::vector<double> attained;           // I_j(S_j), by product position

  std::size_t slots_used() const {
    std::size_t k = 0;
    for (const auto& s : sets) k += s.size();
    return k;
  }

  std::size_t satisfied_count(const std::vector<ProductSpec>& products) const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < products.size() && i < attained.size(); ++i) {
      k += attained[i] >= products[i].demand - 1e-12;
    }
    return k;
  }
};

enum class GreedyRule {
  PureGain,     // argmax marginal gain, the default
  GainPerCost,  // comparison variant behind a flag
};

/// One pass of the budgeted greedy allocation: products in the sampled
/// order, each repeatedly taking the affordable unallocated slot with the
/// best product-specific marginal gain until its demand is met or nothing
/// affordable improves.  Infeasibility is an outcome, not an error.
inline AllocationOutcome run_one_permutation(
    const InfluenceMatrix& matrix, const CostTable& costs,
    const std::vector<ProductSpec>& products, const PermutationSample& perm,
    GreedyRule rule = GreedyRule::PureGain) {
  const std::size_t l = products.size();
  const std::size_t n = matrix.slot_count();
  if (perm.product_order.size() != l || perm.slot_priority.size() != n) {
    throw std::invalid_argument("permutation sample size mismatch");
  }

  AllocationOutcome out;
  out.sets.assign(l, SlotSet{});
  out.residual_budgets.assign(l, 0.0);
  out.attained.assign(l, 0.0);
  for (std::size_t i = 0; i < l; ++i) out.residual_budgets[i] = products[i].budget;

  std::vector<char> allocated(n, 0);
  out.feasible = true;
  for (std::uint32_t pos = 0; pos < l; ++pos) {
    const std::uint32_t i = perm.product_order[pos];
    const auto& product = products[i];
    product.validate();
    const std::uint32_t j = matrix.product_index(product.product_id);
    SurvivalCache cache(matrix, j);
    double& budget = out.residual_budgets[i];

    while (budget > 0.0 && cache.value() < product.demand) {
      bool found = false;
      SlotId best = 0;
      double best_score = 0.0;
      for (SlotId s : perm.slot_priority) {
        if (allocated[s] || costs[s] > budget) continue;
        const double gain = cache.gain(s);
        if (gain <= 0.0) continue;
        const double score = rule == GreedyRule::PureGain ? gain : gain / costs[s];
        if (!found || score > best_score) {
          found = true;
          best = s;
          best_score = score;
        }
      }
      if (!found) break;  // no affordable slot improves
      allocated[best] = 1;
      out.sets[i].add(best);
      budget -= costs[best];
      out.cost += costs[best];
      cache.add(best);
    }
    out.attained[i] = cache.value();
    if (cache.value() < product.demand) {
      out.feasible = false;
      break;
    }
  }
  return out;
}

/// Hoeffding bound on the number of sampled permutation pairs:
/// ceil(ln(2/delta) * total_cost^2 / (2 eps^2 best_cost^2)).
inline std::uint64_t sample_size(double confidence_delta, double epsilon,
                                 double total_cost, double best_cost_estimate) {
  if (!(confidence_delta > 0.0) || !(confidence_delta < 1.0)) {
    throw std::invalid_argument("confidence delta must be in (0,1)");
  }
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0,1)");
  }
  if (!(best_cost_estimate > 0.0)) {
    throw std::invalid_argument("best-cost estimate must be positive");
  }
  const double bound = std::log(2.0 / confidence_delta) * total_cost * total_cost /
                       (2.0 * epsilon * epsilon * best_cost_estimate *
                        best_cost_estimate);
  return static_cast<std::uint64_t>(std::ceil(bound));
}

struct SampleStats {
  std::uint64_t requested_samples = 0;  // total actually run
  std::uint64_t feasible_count = 0;
  std::optional<double> best_cost;      // absent when nothing was feasible
  double cost_upper_bound = 0.0;        // w(BS)
  bool pilot_fallback = false;          // pilot found nothing feasible
};

struct SampleRecord {
  std::uint64_t sample_id = 0;
  bool feasible = false;
  double cost = 0.0;
  std::uint64_t satisfied = 0;
};

struct DisjointConfig {
  double confidence_delta = 0.1;
  double epsilon = 0.1;
  double pilot_fraction = 0.0;   // <= 0 -> pilot of min(64, max_samples)
  std::uint64_t seed = 0;
  std::uint64_t max_samples = 2048;  // cap on the Hoeffding bound
  GreedyRule rule = GreedyRule::PureGain;
  int workers = 1;
};

struct DisjointResult {
  AllocationOutcome best;               // best feasible, or best effort
  SampleStats stats;
  std::vector<SampleRecord> history;    // per-sample, in sample order
};

namespace detail {

inline PermutationSample sample_for_index(const ProblemInstance& instance,
                                          std::uint64_t seed,
                                          std::uint64_t index) {
  return PermutationSample::random(instance.products.size(),
                                   instance.slot_count(), mix_seed(seed, index));
}

/// Feasible beats infeasible; among feasible lower cost wins; among
/// infeasible more satisfied demands win, then lower cost.  Ties keep the
/// earlier sample.
inline bool outcome_better(const SampleRecord& a, const SampleRecord& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible && a.satisfied != b.satisfied) return a.satisfied > b.satisfied;
  return a.cost < b.cost;
}

}  // namespace detail

/// Runs an explicit list of permutation samples and keeps the minimum-cost
/// feasible outcome.  When nothing is feasible the returned outcome is the
/// best effort: most demands satisfied, then cheapest, then earliest.
/// Samples are independent, so with `workers` > 1 they are mapped across a
/// thread pool; the reduction scans records in sample order, making the
/// result identical for any worker count.
inline DisjointResult run_permutations(
    const ProblemInstance& instance,
    const std::vector<PermutationSample>& samples,
    GreedyRule rule = GreedyRule::PureGain, int workers = 1) {
  DisjointResult result;
  result.stats.cost_upper_bound = instance.costs.total();
  result.stats.requested_samples = samples.size();

  if (workers > 1 && samples.size() > 1) {
    result.history.resize(samples.size());
    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(workers, static_cast<int>(samples.size()));
    for (int w = 0; w < nthreads; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t i = static_cast<std::size_t>(w); i < samples.size();
             i += static_cast<std::size_t>(nthreads)) {
          AllocationOutcome outcome =
              run_one_permutation(instance.matrix, instance.costs,
                                  instance.products, samples[i], rule);
          result.history[i] = {i, outcome.feasible, outcome.cost,
                               outcome.satisfied_count(instance.products)};
        }
      });
    }
    for (auto& t : pool) t.join();

    std::size_t best_index = 0;
    for (std::size_t i = 0; i < result.history.size(); ++i) {
      const auto& rec = result.history[i];
      if (rec.feasible) {
        ++result.stats.feasible_count;
        if (!result.stats.best_cost || rec.cost < *result.stats.best_cost) {
          result.stats.best_cost = rec.cost;
        }
      }
      if (detail::outcome_better(rec, result.history[best_index])) best_index = i;
    }
    result.best = run_one_permutation(instance.matrix, instance.costs,
                                      instance.products, samples[best_index],
                                      rule);
    return result;
  }

  bool have_any = false;
  SampleRecord best_rec;
  for (std::uint64_t i = 0; i < samples.size(); ++i) {
    AllocationOutcome outcome = run_one_permutation(
        instance.matrix, instance.costs, instance.products, samples[i], rule);
    SampleRecord rec{i, outcome.feasible, outcome.cost,
                     outcome.satisfied_count(instance.products)};
    result.history.push_back(rec);
    if (outcome.feasible) {
      ++result.stats.feasible_count;
      if (!result.stats.best_cost || outcome.cost < *result.stats.best_cost) {
        result.stats.best_cost = outcome.cost;
      }
    }
    if (!have_any || detail::outcome_better(rec, best_rec)) {
      have_any = true;
      best_rec = rec;
      result.best = std::move(outcome);
    }
  }
  return result;
}

/// Two-phase sampled solver: a pilot of uniformly random permutation pairs
/// seeds the best-cost estimate, the Hoeffding bound then fixes the total
/// (clamped to the configured cap).  A pilot with no feasible outcome falls
/// back to the cap.
inline DisjointResult solve_disjoint(const ProblemInstance& instance,
                                     const DisjointConfig& config) {
  if (config.max_samples == 0) {
    throw std::invalid_argument("need at least one sample");
  }
  const std::uint64_t cap = config.max_samples;
  std::uint64_t pilot =
      config.pilot_fraction > 0.0
          ? static_cast<std::uint64_t>(
                std::ceil(config.pilot_fraction * static_cast<double>(cap)))
          : std::min<std::uint64_t>(64, cap);
  pilot = std::clamp<std::uint64_t>(pilot, 1, cap);

  std::vector<PermutationSample> samples;
  samples.reserve(pilot);
  for (std::uint64_t i = 0; i < pilot; ++i) {
    samples.push_back(detail::sample_for_index(instance, config.seed, i));
  }
  DisjointResult result =
      run_permutations(instance, samples, config.rule, config.workers);

  std::uint64_t total = cap;
  if (result.stats.best_cost) {
    total = std::clamp<std::uint64_t>(
        sample_size(config.confidence_delta, config.epsilon,
                    instance.costs.total(), *result.stats.best_cost),
        pilot, cap);
  } else {
    result.stats.pilot_fallback = true;
  }

  if (total > pilot) {
    std::vector<PermutationSample> rest;
    rest.reserve(total - pilot);
    for (std::uint64_t i = pilot; i < total; ++i) {
      rest.push_back(detail::sample_for_index(instance, config.seed, i));
    }
    DisjointResult tail =
        run_permutations(instance, rest, config.rule, config.workers);
    for (auto& rec : tail.history) {
      rec.sample_id += pilot;
      result.history.push_back(rec);
    }
    result.stats.feasible_count += tail.stats.feasible_count;
    if (tail.stats.best_cost &&
        (!result.stats.best_cost || *tail.stats.best_cost < *result.stats.best_cost)) {
      result.stats.best_cost = tail.stats.best_cost;
    }
    const SampleRecord head_rec{0, result.best.feasible, result.best.cost,
                                result.best.satisfied_count(instance.products)};
    const SampleRecord tail_rec{1, tail.best.feasible, tail.best.cost,
                                tail.best.satisfied_count(instance.products)};
    if (detail::outcome_better(tail_rec, head_rec)) {
      result.best = std::move(tail.best);
    }
  }
  result.stats.requested_samples = total;
  return result;
}

/// Full enumeration of all l! * n! permutation pairs, gated to small
/// instances; the oracle the sampler is measured against.
inline DisjointResult solve_disjoint_exhaustive(
    const ProblemInstance& instance, GreedyRule rule = GreedyRule::PureGain,
    std::uint64_t gate = 1000000) {
  const std::size_t l = instance.products.size();
  const std::size_t n = instance.slot_count();
  double combos = 1.0;
  for (std::size_t i = 2; i <= l; ++i) combos *= static_cast<double>(i);
  for (std::size_t i = 2; i <= n; ++i) combos *= static_cast<double>(i);
  if (combos > static_cast<double>(gate)) {
    throw std::invalid_argument("exhaustive enumeration gated to " +
                                std::to_string(gate) + " permutation pairs");
  }
  std::vector<PermutationSample> samples;
  auto porder = identity_permutation(l);
  do {
    auto sorder = identity_permutation(n);
    do {
      PermutationSample s;
      s.product_order = porder;
      s.slot_priority = sorder;
      samples.push_back(std::move(s));
    } while (std::next_permutation(sorder.begin(), sorder.end()));
  } while (std::next_permutation(porder.begin(), porder.end()));
  return run_permutations(instance, samples, rule);
}

/// Outcome dump `sample_id,feasible,cost` plus per-product slot lists of
/// the best allocation.
inline void dump_disjoint_result(const std::string& samples_path,
                                 const std::string& allocation_path,
                                 const std::vector<ProductSpec>& products,
                                 const DisjointResult& result) {
  std::ofstream out(samples_path);
  if (!out) throw std::runtime_error("cannot write " + samples_path);
  out << "sample_id,feasible,cost\n";
  out.precision(17);
  for (const auto& rec : result.history) {
    out << rec.sample_id << ',' << (rec.feasible ? 1 : 0) << ',' << rec.cost
        << '\n';
  }
  std::ofstream alloc(allocation_path);
  if (!alloc) throw std::runtime_error("cannot write " + allocation_path);
  alloc << "product_id,slot_id\n";
  for (std::size_t i = 0; i < result.best.sets.size(); ++i) {
    for (SlotId s : result.best.sets[i]) {
      alloc << products[i].product_id << ',' << s << '\n';
    }
  }
}

}  // namespace slotsel

#endif  // SLOTSEL_DISJOINT_HPP
