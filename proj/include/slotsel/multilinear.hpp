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

#ifndef SLOTSEL_MULTILINEAR_HPP
#define SLOTSEL_MULTILINEAR_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "slotsel/influence.hpp"
#include "slotsel/rng.hpp"

namespace slotsel {

/// x in [0,1]^n over slot ids; unset coordinates are 0.
struct FractionalPoint {
  std::vector<double> coords;

  FractionalPoint() = default;
  explicit FractionalPoint(std::size_t n) : coords(n, 0.0) {}

  double operator[](SlotId s) const {
    return s < coords.size() ? coords[s] : 0.0;
  }

  void set(SlotId s, double v) {
    if (v < 0.0 || v > 1.0) {
      throw std::invalid_argument("coordinate outside [0,1]");
    }
    if (s >= coords.size()) coords.resize(s + 1, 0.0);
    coords[s] = v;
  }

  static FractionalPoint indicator(std::size_t n, const SlotSet& s) {
    FractionalPoint x(n);
    for (SlotId id : s) x.coords.at(id) = 1.0;
    return x;
  }

  std::size_t support() const {
    std::size_t k = 0;
    for (double v : coords) k += (v > 0.0);
    return k;
  }
};

/// Weighted-coverage objective: value(x) = sum_u c_u * (1 - prod_s (1 - x_s
/// Pr(s,u))).  A single normalized product sets c_u = 1/scale on U_j; the
/// multi-product aggregate sums 1/scale_j over each user's products, which
/// keeps evaluation one survival pass no matter how many products there are.
class Objective {
 public:
  Objective(const InfluenceMatrix& m, std::vector<double> user_weight)
      : matrix_(&m), user_weight_(std::move(user_weight)) {
    if (user_weight_.size() != m.user_count()) {
      throw std::invalid_argument("user weight vector size mismatch");
    }
  }

  static Objective single_product(const InfluenceMatrix& m,
                                  std::uint32_t product, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    std::vector<double> w(m.user_count(), 0.0);
    for (auto u : m.product_users.at(product)) w[u] = 1.0 / scale;
    return Objective(m, std::move(w));
  }

  /// sum_j F_j(x) / scale_j over the given (product, scale) pairs.
  static Objective sum_normalized(
      const InfluenceMatrix& m,
      const std::vector<std::pair<std::uint32_t, double>>& terms) {
    std::vector<double> w(m.user_count(), 0.0);
    for (const auto& [product, scale] : terms) {
      if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
      for (auto u : m.product_users.at(product)) w[u] += 1.0 / scale;
    }
    return Objective(m, std::move(w));
  }

  const InfluenceMatrix& matrix() const { return *matrix_; }

  /// Per-user survival products prod_s (1 - x_s Pr(s,u)).
  std::vector<double> survival(const FractionalPoint& x) const {
    std::vector<double> surv(matrix_->user_count(), 1.0);
    const std::size_t n = std::min(x.coords.size(), matrix_->slot_count());
    for (std::size_t s = 0; s < n; ++s) {
      const double xs = x.coords[s];
      if (xs <= 0.0) continue;
      for (const auto& e : matrix_->entries[s]) {
        surv[e.user] *= 1.0 - xs * e.probability;
      }
    }
    return surv;
  }

  double value(const FractionalPoint& x) const {
    auto surv = survival(x);
    double total = 0.0;
    for (std::size_t u = 0; u < surv.size(); ++u) {
      total += user_weight_[u] * (1.0 - surv[u]);
    }
    return total;
  }

  /// F(y or 1_e) - F(y) given the survival products of y; O(deg(e)).
  double lift(const FractionalPoint& y, const std::vector<double>& surv,
              SlotId e) const {
    const double ye = y[e];
    if (ye >= 1.0) return 0.0;
    double gain = 0.0;
    for (const auto& entry : matrix_->entries.at(e)) {
      const double p = entry.probability;
      const double denom = 1.0 - ye * p;
      if (denom <= 0.0) continue;
      gain += user_weight_[entry.user] * surv[entry.user] * p * (1.0 - ye) /
              denom;
    }
    return gain;
  }

  /// Set-function value f(S) under the same weights.
  double set_value(const SlotSet& s) const {
    std::vector<double> surv(matrix_->user_count(), 1.0);
    for (SlotId slot : s) {
      for (const auto& e : matrix_->entries.at(slot)) {
        surv[e.user] *= 1.0 - e.probability;
      }
    }
    double total = 0.0;
    for (std::size_t u = 0; u < surv.size(); ++u) {
      total += user_weight_[u] * (1.0 - surv[u]);
    }
    return total;
  }

 private:
  const InfluenceMatrix* matrix_;
  std::vector<double> user_weight_;
};

/// Closed-form multilinear extension of the normalized product influence:
/// (1/scale) * sum_{u in U_j} [1 - prod_s (1 - x_s Pr(s,u))].  Exact for
/// coverage functions, where independent inclusion factorizes per user.
inline double F_exact(const InfluenceMatrix& m, const FractionalPoint& x,
                      std::uint32_t product, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  if (product >= m.product_count()) {
    throw std::invalid_argument("unknown product index " +
                                std::to_string(product));
  }
  return Objective::single_product(m, product, scale).value(x);
}

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/// Monte-Carlo estimate of the same expectation: draws `samples` random
/// subsets by independent inclusion and averages the set values.  Each
/// sample gets its own counter-derived RNG so the result is identical no
/// matter how the samples would be scheduled.
inline McEstimate F_mc(const InfluenceMatrix& m, const FractionalPoint& x,
                       std::uint32_t product, double scale,
                       std::uint64_t samples, std::uint64_t seed) {
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  if (product >= m.product_count()) {
    throw std::invalid_argument("unknown product index " +
                                std::to_string(product));
  }
  const std::size_t n = m.slot_count();
  // Welford's update; constant samples give an exact zero variance.
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    Rng rng(mix_seed(seed, i));
    std::vector<SlotId> drawn;
    for (std::size_t s = 0; s < n; ++s) {
      const double xs = x[static_cast<SlotId>(s)];
      if (xs > 0.0 && rng.uniform() < xs) drawn.push_back(static_cast<SlotId>(s));
    }
    const double v = product_influence(m, SlotSet(std::move(drawn)), product) / scale;
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  McEstimate out;
  out.estimate = mean;
  if (samples > 1) {
    const double ns = static_cast<double>(samples);
    out.stderr_ = std::sqrt(m2 / (ns - 1.0) / ns);
  }
  return out;
}

/// w_e = F(y or 1_e) - F(y) with coordinate-wise maximum; exact evaluation.
inline double lifted_weight(const FractionalPoint& y, SlotId e,
                            const Objective& objective) {
  return objective.lift(y, objective.survival(y), e);
}

}  // namespace slotsel

#endif  // SLOTSEL_MULTILINEAR_HPP
