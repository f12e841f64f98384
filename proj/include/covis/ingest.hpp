// Copyright 2026 The covis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace covis {

using LocationId = std::uint32_t;
using Uid = std::uint64_t;

inline constexpr int kSlotsPerDay = 48;

// Aggregated grid dimensions; the node universe of a hypergraph.
struct GridDims {
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  std::uint32_t cell_count() const { return width * height; }
  bool operator==(const GridDims&) const = default;
};

struct GridSpec {
  std::uint32_t raw_width = 200;
  std::uint32_t raw_height = 200;
  std::uint32_t scale = 10;

  // ceil(raw / scale) in each dimension.
  GridDims aggregated() const;
  // Throws UsageError on zero dimensions or scale.
  void validate() const;
};

struct Location {
  std::uint32_t cell_x = 0;
  std::uint32_t cell_y = 0;

  bool operator==(const Location&) const = default;
};

// Row-major canonical id.
inline LocationId location_id(Location loc, GridDims dims) {
  return loc.cell_y * dims.width + loc.cell_x;
}
inline Location location_of(LocationId id, GridDims dims) {
  return {id % dims.width, id / dims.width};
}

struct TrajectoryRecord {
  Uid uid = 0;
  std::uint32_t day = 0;
  std::uint32_t timeslot = 0;
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  bool operator==(const TrajectoryRecord&) const = default;
};

/// Reads CSV with header `uid,d,t,x,y`. Every row is validated against
/// `grid`'s raw bounds and the 48-slot day; errors carry the 1-based line.
std::vector<TrajectoryRecord> parse_records(std::istream& in, const GridSpec& grid);

/// Streaming variant for large inputs; `sink` sees records in file order.
void for_each_record(std::istream& in, const GridSpec& grid,
                     const std::function<void(const TrajectoryRecord&)>& sink);

void write_records(std::ostream& out, std::span<const TrajectoryRecord> records);

/// floor(x / s), floor(y / s).
inline Location aggregate_cell(std::uint32_t x, std::uint32_t y, std::uint32_t scale) {
  return {x / scale, y / scale};
}

struct DayRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;  // exclusive

  std::uint32_t length() const { return hi - lo; }
  bool contains(std::uint32_t d) const { return d >= lo && d < hi; }
  bool overlaps(const DayRange& o) const { return lo < o.hi && o.lo < hi; }
  bool operator==(const DayRange&) const = default;
};

/// The per-individual, per-day visited-location sets over a day range.
///
/// Days are stored relative to `days().lo`. Individuals are those uids with
/// at least one visit inside the range, in ascending order. A missing
/// (individual, day) pair is an empty set. Immutable once built.
class VisitLog {
 public:
  VisitLog() = default;

  DayRange days() const { return days_; }
  std::uint32_t horizon() const { return days_.length(); }
  GridDims grid() const { return grid_; }
  std::span<const Uid> individuals() const { return uids_; }
  std::size_t individual_count() const { return uids_.size(); }

  // Locations of individual index `ind` on relative day `day`, ascending.
  std::span<const LocationId> visits(std::size_t ind, std::uint32_t day) const;
  // Lookup by uid and absolute day; empty if absent.
  std::span<const LocationId> visits_of(Uid uid, std::uint32_t abs_day) const;

  std::size_t visit_count() const { return items_.size(); }

  // Restricts to a sub-range of days (absolute), dropping individuals left
  // without visits. Throws DataError if `range` is outside this log.
  VisitLog slice(DayRange range) const;

  bool operator==(const VisitLog&) const = default;

 private:
  friend class VisitLogBuilder;

  DayRange days_;
  GridDims grid_;
  std::vector<Uid> uids_;
  std::vector<std::size_t> offsets_;  // uids_.size() * horizon + 1
  std::vector<LocationId> items_;
};

/// Accumulates (uid, absolute day, location) visits in any order, with
/// duplicates, and produces the canonical VisitLog. Without a day range the
/// log spans [0, max observed day + 1).
class VisitLogBuilder {
 public:
  VisitLogBuilder(GridDims grid, std::optional<DayRange> days);

  // Visits outside the day range are ignored.
  void add(Uid uid, std::uint32_t abs_day, LocationId loc);

  VisitLog build() &&;

 private:
  struct Entry {
    Uid uid;
    std::uint32_t day;
    LocationId loc;
    auto operator<=>(const Entry&) const = default;
  };
  void compact();

  GridDims grid_;
  std::optional<DayRange> days_;
  std::vector<Entry> entries_;
  std::size_t compacted_size_ = 0;
};

VisitLog build_visit_log(std::span<const TrajectoryRecord> records, const GridSpec& grid,
                         DayRange days);

/// Parses and aggregates in one pass without materializing records.
/// When `days` is empty the range becomes [0, max observed day + 1).
VisitLog read_visit_log(std::istream& in, const GridSpec& grid, std::optional<DayRange> days);

}  // namespace covis
