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

#ifndef SLOTSEL_CONTINUOUS_GREEDY_HPP
#define SLOTSEL_CONTINUOUS_GREEDY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "slotsel/multilinear.hpp"

namespace slotsel {

/// Solvable polytope for the LP-direction step: either a cardinality cap
/// or a knapsack over the slot costs.  Both contain the zero vector.
class Polytope {
 public:
  enum class Kind { Cardinality, Knapsack };

  static Polytope cardinality(std::size_t cap) {
    Polytope p;
    p.kind_ = Kind::Cardinality;
    p.cap_ = cap;
    return p;
  }

  static Polytope knapsack(std::vector<double> cost, double budget) {
    if (budget < 0.0) throw std::invalid_argument("budget must be nonnegative");
    for (double c : cost) {
      if (!(c > 0.0)) throw std::invalid_argument("knapsack costs must be positive");
    }
    Polytope p;
    p.kind_ = Kind::Knapsack;
    p.cost_ = std::move(cost);
    p.budget_ = budget;
    return p;
  }

  Kind kind() const { return kind_; }
  std::size_t cap() const { return cap_; }
  double budget() const { return budget_; }
  const std::vector<double>& cost() const { return cost_; }

 private:
  Kind kind_ = Kind::Cardinality;
  std::size_t cap_ = 0;
  double budget_ = 0.0;
  std::vector<double> cost_;
};

/// argmax { x . w | x in P }, returned as a vertex of P.  Cardinality picks
/// the top-cap positive weights; knapsack is the fractional greedy by
/// weight/cost ratio with at most one fractional coordinate.  Ties break to
/// the lowest slot id.
inline FractionalPoint lp_direction(const std::vector<double>& weights,
                                    const Polytope& polytope) {
  const std::size_t n = weights.size();
  for (double w : weights) {
    if (!std::isfinite(w)) throw std::invalid_argument("non-finite weight");
  }
  FractionalPoint x(n);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (weights[i] > 0.0) order.push_back(i);
  }

  if (polytope.kind() == Polytope::Kind::Cardinality) {
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (weights[a] != weights[b]) return weights[a] > weights[b];
      return a < b;
    });
    const std::size_t take = std::min(order.size(), polytope.cap());
    for (std::size_t i = 0; i < take; ++i) x.coords[order[i]] = 1.0;
    return x;
  }

  const auto& cost = polytope.cost();
  if (cost.size() != n) {
    throw std::invalid_argument("knapsack cost vector size mismatch");
  }
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const double ra = weights[a] / cost[a];
    const double rb = weights[b] / cost[b];
    if (ra != rb) return ra > rb;
    return a < b;
  });
  double remaining = polytope.budget();
  for (auto i : order) {
    if (remaining <= 0.0) break;
    if (cost[i] <= remaining) {
      x.coords[i] = 1.0;
      remaining -= cost[i];
    } else {
      x.coords[i] = remaining / cost[i];
      remaining = 0.0;
    }
  }
  return x;
}

struct TraceStep {
  double t = 0.0;
  std::size_t support = 0;  // nonzeros of the chosen direction
  double value = 0.0;       // F(y(t)) after the update
};

struct GreedyTrace {
  std::vector<TraceStep> steps;

  void dump(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,F,support\n";
    out.precision(17);
    for (const auto& s : steps) {
      out << s.t << ',' << s.value << ',' << s.support << '\n';
    }
  }
};

struct GreedyResult {
  FractionalPoint point;
  GreedyTrace trace;
};

/// Default discretization T / ceil(n*T*10); fine enough that the damped
/// update stays within the 1-1/e envelope at test scales.
inline double default_step_size(std::size_t n, double horizon) {
  const double steps = std::ceil(std::max<double>(1, n) * horizon * 10.0);
  return horizon / std::max(1.0, steps);
}

/// The literal stepsize T * ceil(n^5 T)^-1; unusable beyond toy n.
inline double analysis_step_size(std::size_t n, double horizon) {
  const double n5 = std::pow(static_cast<double>(std::max<std::size_t>(1, n)), 5.0);
  return horizon / std::max(1.0, std::ceil(n5 * horizon));
}

/// Discrete-time continuous greedy: per step, compute every lifted weight
/// w_e(t) = F(y or 1_e) - F(y), take the LP-optimal direction in the
/// polytope, and apply y_e += step * dir_e * (1 - y_e).  The damping keeps
/// every coordinate inside [0,1]; monotone weights keep F non-decreasing.
inline GreedyResult continuous_greedy(const Objective& objective,
                                      const Polytope& polytope, double horizon,
                                      double step_size) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(step_size > 0.0) || step_size > horizon) {
    throw std::invalid_argument("step size must lie in (0, horizon]");
  }
  const double ratio = horizon / step_size;
  const std::int64_t steps = static_cast<std::int64_t>(std::llround(ratio));
  if (steps <= 0 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
    throw std::invalid_argument("step size must divide the horizon exactly");
  }

  const InfluenceMatrix& m = objective.matrix();
  const std::size_t n = m.slot_count();
  GreedyResult result;
  result.point = FractionalPoint(n);
  result.trace.steps.push_back({0.0, 0, objective.value(result.point)});

  std::vector<double> weights(n, 0.0);
  for (std::int64_t k = 0; k < steps; ++k) {
    auto surv = objective.survival(result.point);
    for (std::size_t e = 0; e < n; ++e) {
      weights[e] = objective.lift(result.point, surv, static_cast<SlotId>(e));
    }
    FractionalPoint dir = lp_direction(weights, polytope);
    std::size_t support = 0;
    for (std::size_t e = 0; e < n; ++e) {
      const double d = dir.coords[e];
      if (d <= 0.0) continue;
      ++support;
      double& y = result.point.coords[e];
      y += step_size * d * (1.0 - y);
      if (y > 1.0) y = 1.0;
    }
    const double t = static_cast<double>(k + 1) * step_size;
    result.trace.steps.push_back({t, support, objective.value(result.point)});
  }
  return result;
}

}  // namespace slotsel

#endif  // SLOTSEL_CONTINUOUS_GREEDY_HPP
