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

#ifndef SLOTSEL_IO_HPP
#define SLOTSEL_IO_HPP

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slotsel/influence.hpp"
#include "slotsel/model.hpp"

namespace slotsel {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string strip(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

inline double parse_double(const std::string& field, const std::string& path,
                           std::size_t line_no, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": bad " + what +
                     " '" + field + "'");
  }
}

inline std::int64_t parse_int(const std::string& field, const std::string& path,
                              std::size_t line_no, const char* what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || p != field.data() + field.size()) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": bad " + what +
                     " '" + field + "'");
  }
  return v;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

/// Trajectory records plus the raw data horizon (T1 = min start,
/// T2 = max end).  The horizon is unset for an empty database and any
/// attempt to use it then is an error.
struct TrajectoryData {
  std::vector<TrajectoryRecord> records;
  std::optional<std::pair<std::int64_t, std::int64_t>> horizon;

  std::pair<std::int64_t, std::int64_t> require_horizon() const {
    if (!horizon) {
      throw std::logic_error("trajectory database is empty; horizon undefined");
    }
    return *horizon;
  }
};

/// Reads `user,lat,lon,start,end,affinities` (header required, affinities a
/// semicolon-separated sub-list).  When `known_products` is non-empty every
/// affinity must be one of them.
inline TrajectoryData load_trajectories(
    const std::string& path,
    const std::vector<std::string>& known_products = {}) {
  auto lines = detail::read_lines(path);
  if (lines.empty()) throw ParseError(path + ": missing header row");
  TrajectoryData data;
  std::set<std::string> known(known_products.begin(), known_products.end());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string line = detail::strip(lines[i]);
    if (line.empty()) continue;
    const std::size_t line_no = i + 1;
    auto fields = detail::split(line, ',');
    if (fields.size() != 6) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 6 fields, got " +
                       std::to_string(fields.size()));
    }
    TrajectoryRecord r;
    r.user = detail::strip(fields[0]);
    if (r.user.empty()) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": empty user id");
    }
    r.lat = detail::parse_double(fields[1], path, line_no, "latitude");
    r.lon = detail::parse_double(fields[2], path, line_no, "longitude");
    r.interval.start = detail::parse_int(fields[3], path, line_no, "start");
    r.interval.end = detail::parse_int(fields[4], path, line_no, "end");
    if (r.interval.end <= r.interval.start) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": interval end must exceed start");
    }
    const std::string aff = detail::strip(fields[5]);
    if (!aff.empty()) {
      for (auto& p : detail::split(aff, ';')) {
        p = detail::strip(p);
        if (p.empty()) continue;
        if (!known.empty() && known.count(p) == 0) {
          throw ParseError(path + ":" + std::to_string(line_no) +
                           ": unknown product '" + p + "'");
        }
        r.affinities.push_back(p);
      }
    }
    if (!data.horizon) {
      data.horizon = {r.interval.start, r.interval.end};
    } else {
      data.horizon->first = std::min(data.horizon->first, r.interval.start);
      data.horizon->second = std::max(data.horizon->second, r.interval.end);
    }
    data.records.push_back(std::move(r));
  }
  return data;
}

inline void save_trajectories(const std::string& path,
                              const std::vector<TrajectoryRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "user,lat,lon,start,end,affinities\n";
  out.precision(17);
  for (const auto& r : records) {
    out << r.user << ',' << r.lat << ',' << r.lon << ',' << r.interval.start
        << ',' << r.interval.end << ',';
    for (std::size_t i = 0; i < r.affinities.size(); ++i) {
      if (i) out << ';';
      out << r.affinities[i];
    }
    out << '\n';
  }
}

/// Reads `billboard_id,lat,lon,size`.
inline std::vector<Billboard> load_billboards(const std::string& path) {
  auto lines = detail::read_lines(path);
  if (lines.empty()) throw ParseError(path + ": missing header row");
  std::vector<Billboard> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string line = detail::strip(lines[i]);
    if (line.empty()) continue;
    const std::size_t line_no = i + 1;
    auto fields = detail::split(line, ',');
    if (fields.size() != 4) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 4 fields, got " +
                       std::to_string(fields.size()));
    }
    Billboard b;
    b.billboard_id = detail::strip(fields[0]);
    b.lat = detail::parse_double(fields[1], path, line_no, "latitude");
    b.lon = detail::parse_double(fields[2], path, line_no, "longitude");
    b.size = detail::parse_double(fields[3], path, line_no, "size");
    if (!(b.size > 0.0)) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": size must be positive");
    }
    out.push_back(std::move(b));
  }
  return out;
}

inline void save_billboards(const std::string& path,
                            const std::vector<Billboard>& billboards) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "billboard_id,lat,lon,size\n";
  out.precision(17);
  for (const auto& b : billboards) {
    out << b.billboard_id << ',' << b.lat << ',' << b.lon << ',' << b.size
        << '\n';
  }
}

/// Reads `slot_id,cost` into a dense table over `slot_count` slots.
inline CostTable load_costs(const std::string& path, std::size_t slot_count) {
  auto lines = detail::read_lines(path);
  if (lines.empty()) throw ParseError(path + ": missing header row");
  std::vector<double> cost(slot_count, 0.0);
  std::vector<char> seen(slot_count, 0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string line = detail::strip(lines[i]);
    if (line.empty()) continue;
    const std::size_t line_no = i + 1;
    auto fields = detail::split(line, ',');
    if (fields.size() != 2) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 2 fields, got " +
                       std::to_string(fields.size()));
    }
    const std::int64_t id = detail::parse_int(fields[0], path, line_no, "slot id");
    if (id < 0 || static_cast<std::size_t>(id) >= slot_count) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": slot id out of range");
    }
    if (seen[static_cast<std::size_t>(id)]) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": duplicate cost for slot " + fields[0]);
    }
    seen[static_cast<std::size_t>(id)] = 1;
    cost[static_cast<std::size_t>(id)] =
        detail::parse_double(fields[1], path, line_no, "cost");
  }
  return CostTable(std::move(cost));  // rejects missing (zero) costs
}

inline void save_costs(const std::string& path, const CostTable& costs) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "slot_id,cost\n";
  out.precision(17);
  for (std::size_t s = 0; s < costs.size(); ++s) {
    out << s << ',' << costs[static_cast<SlotId>(s)] << '\n';
  }
}

/// Reads `product_id,demand,threshold,budget`.
inline std::vector<ProductSpec> load_products(const std::string& path) {
  auto lines = detail::read_lines(path);
  if (lines.empty()) throw ParseError(path + ": missing header row");
  std::vector<ProductSpec> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string line = detail::strip(lines[i]);
    if (line.empty()) continue;
    const std::size_t line_no = i + 1;
    auto fields = detail::split(line, ',');
    if (fields.size() != 4) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 4 fields, got " +
                       std::to_string(fields.size()));
    }
    ProductSpec p;
    p.product_id = detail::strip(fields[0]);
    p.demand = detail::parse_double(fields[1], path, line_no, "demand");
    p.threshold = detail::parse_double(fields[2], path, line_no, "threshold");
    p.budget = detail::parse_double(fields[3], path, line_no, "budget");
    p.validate();
    out.push_back(std::move(p));
  }
  return out;
}

inline void save_products(const std::string& path,
                          const std::vector<ProductSpec>& products) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "product_id,demand,threshold,budget\n";
  out.precision(17);
  for (const auto& p : products) {
    out << p.product_id << ',' << p.demand << ',' << p.threshold << ','
        << p.budget << '\n';
  }
}

/// Debug dump `slot_id,user,probability`.
inline void dump_matrix(const std::string& path, const InfluenceMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "slot_id,user,probability\n";
  out.precision(17);
  for (std::size_t s = 0; s < m.entries.size(); ++s) {
    for (const auto& e : m.entries[s]) {
      out << s << ',' << m.users[e.user] << ',' << e.probability << '\n';
    }
  }
}

}  // namespace slotsel

#endif  // SLOTSEL_IO_HPP
