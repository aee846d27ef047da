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

#ifndef SLOTSEL_MODEL_HPP
#define SLOTSEL_MODEL_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace slotsel {

using SlotId = std::uint32_t;

/// Half-open-by-convention time span in epoch seconds, start < end.
struct TimeInterval {
  std::int64_t start = 0;
  std::int64_t end = 0;

  std::int64_t length() const { return end - start; }

  /// Positive-length overlap; touching endpoints do not count.
  bool overlaps(const TimeInterval& other) const {
    return std::max(start, other.start) < std::min(end, other.end);
  }
};

inline bool operator==(const TimeInterval& a, const TimeInterval& b) {
  return a.start == b.start && a.end == b.end;
}

/// One stay of one person: who, where (WGS-84 degrees), when, and the
/// products they care about.
struct TrajectoryRecord {
  std::string user;
  double lat = 0.0;
  double lon = 0.0;
  TimeInterval interval;
  std::vector<std::string> affinities;
};

inline bool operator==(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  return a.user == b.user && a.lat == b.lat && a.lon == b.lon &&
         a.interval == b.interval && a.affinities == b.affinities;
}

struct Billboard {
  std::string billboard_id;
  double lat = 0.0;
  double lon = 0.0;
  double size = 1.0;  // panel area, arbitrary consistent units, > 0
};

inline bool operator==(const Billboard& a, const Billboard& b) {
  return a.billboard_id == b.billboard_id && a.lat == b.lat && a.lon == b.lon &&
         a.size == b.size;
}

/// One billboard paired with one window of length exactly Delta.
struct BillboardSlot {
  SlotId slot_id = 0;
  std::uint32_t billboard = 0;  // index into SlotUniverse::billboards
  TimeInterval interval;
};

/// The discretized ground set: every (billboard, Delta-window) pair over
/// the horizon.  |slots| = m * (T2-T1)/Delta.
struct SlotUniverse {
  std::vector<Billboard> billboards;
  std::vector<BillboardSlot> slots;
  std::int64_t horizon_start = 0;
  std::int64_t horizon_end = 0;
  std::int64_t slot_duration = 0;

  std::size_t size() const { return slots.size(); }
};

/// Per-slot selection cost, dense over slot ids, all positive.
class CostTable {
 public:
  CostTable() = default;

  explicit CostTable(std::vector<double> costs) : cost_(std::move(costs)) {
    for (std::size_t i = 0; i < cost_.size(); ++i) {
      if (!(cost_[i] > 0.0)) {
        throw std::invalid_argument("cost of slot " + std::to_string(i) +
                                    " must be positive");
      }
    }
    total_ = std::accumulate(cost_.begin(), cost_.end(), 0.0);
  }

  double operator[](SlotId s) const { return cost_.at(s); }
  std::size_t size() const { return cost_.size(); }
  bool empty() const { return cost_.empty(); }
  double total() const { return total_; }
  const std::vector<double>& values() const { return cost_; }

  double min_cost() const {
    if (cost_.empty()) throw std::logic_error("empty cost table");
    return *std::min_element(cost_.begin(), cost_.end());
  }

 private:
  std::vector<double> cost_;
  double total_ = 0.0;
};

/// One product campaign: influence demand (disjoint variant), cover
/// threshold (common variant), and budget (disjoint variant).
struct ProductSpec {
  std::string product_id;
  double demand = 0.0;     // sigma_j, expected influenced trajectories
  double threshold = 0.0;  // k_j, cover threshold
  double budget = 0.0;     // B_j, currency

  void validate() const {
    if (demand < 0.0 || threshold < 0.0 || budget < 0.0) {
      throw std::invalid_argument("product " + product_id +
                                  ": demand, threshold and budget must be "
                                  "nonnegative");
    }
  }
};

/// Rounds a raw trajectory horizon outward to Delta multiples so that the
/// span is always divisible by Delta.
inline std::pair<std::int64_t, std::int64_t> align_horizon(
    std::int64_t t1, std::int64_t t2, std::int64_t delta) {
  if (delta <= 0) throw std::invalid_argument("slot duration must be positive");
  if (t2 <= t1) throw std::invalid_argument("horizon end must exceed start");
  auto floor_div = [](std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
  };
  std::int64_t lo = floor_div(t1, delta) * delta;
  std::int64_t hi = t2;
  std::int64_t rem = (hi - lo) % delta;
  if (rem != 0) hi += delta - rem;
  return {lo, hi};
}

/// Builds the slot universe: one slot per Delta-aligned window per
/// billboard, billboard-major, slot ids dense in [0, m*T/Delta).
inline SlotUniverse derive_slots(std::vector<Billboard> billboards,
                                 std::pair<std::int64_t, std::int64_t> horizon,
                                 std::int64_t delta) {
  auto [t1, t2] = horizon;
  if (delta <= 0) throw std::invalid_argument("slot duration must be positive");
  if (t2 <= t1) throw std::invalid_argument("horizon end must exceed start");
  if ((t2 - t1) % delta != 0) {
    throw std::invalid_argument("horizon span " + std::to_string(t2 - t1) +
                                " is not divisible by slot duration " +
                                std::to_string(delta));
  }
  for (const auto& b : billboards) {
    if (!(b.size > 0.0)) {
      throw std::invalid_argument("billboard " + b.billboard_id +
                                  " has non-positive size");
    }
  }
  const std::int64_t windows = (t2 - t1) / delta;
  SlotUniverse u;
  u.billboards = std::move(billboards);
  u.horizon_start = t1;
  u.horizon_end = t2;
  u.slot_duration = delta;
  u.slots.reserve(static_cast<std::size_t>(windows) * u.billboards.size());
  SlotId next = 0;
  for (std::uint32_t b = 0; b < u.billboards.size(); ++b) {
    for (std::int64_t wi = 0; wi < windows; ++wi) {
      BillboardSlot s;
      s.slot_id = next++;
      s.billboard = b;
      s.interval = {t1 + wi * delta, t1 + (wi + 1) * delta};
      u.slots.push_back(s);
    }
  }
  return u;
}

struct ValidationFinding {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
};

/// Instance-consistency report; valid iff no findings at all.
struct ValidationReport {
  std::vector<ValidationFinding> findings;

  bool valid() const { return findings.empty(); }

  void add(ValidationFinding::Severity sev, std::string msg) {
    findings.push_back({sev, std::move(msg)});
  }
};

}  // namespace slotsel

#endif  // SLOTSEL_MODEL_HPP
