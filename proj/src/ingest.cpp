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

#include "covis/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <string>
#include <string_view>

#include "covis/error.hpp"

namespace covis {

GridDims GridSpec::aggregated() const {
  return {(raw_width + scale - 1) / scale, (raw_height + scale - 1) / scale};
}

void GridSpec::validate() const {
  if (raw_width == 0 || raw_height == 0) throw UsageError("grid dimensions must be positive");
  if (scale == 0) throw UsageError("scale must be >= 1");
}

namespace {

constexpr std::array<std::string_view, 5> kFieldNames = {"uid", "d", "t", "x", "y"};

std::string_view trim_eol(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
  return line;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw DataError("line " + std::to_string(line_no) + ": " + what);
}

TrajectoryRecord parse_row(std::string_view line, std::size_t line_no, const GridSpec& grid) {
  std::array<std::uint64_t, 5> v{};
  std::size_t field = 0;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (true) {
    if (field >= v.size()) fail(line_no, "too many fields");
    auto [next, ec] = std::from_chars(p, end, v[field]);
    if (ec != std::errc() || next == p) {
      fail(line_no, "field " + std::string(kFieldNames[field]) + " is not a non-negative integer");
    }
    ++field;
    p = next;
    if (p == end) break;
    if (*p != ',') fail(line_no, "unexpected character after field " + std::string(kFieldNames[field - 1]));
    ++p;
  }
  if (field != v.size()) fail(line_no, "expected 5 fields, got " + std::to_string(field));

  if (v[1] > UINT32_MAX) fail(line_no, "field d out of range");
  if (v[2] >= kSlotsPerDay) fail(line_no, "field t out of range [0, 48)");
  if (v[3] >= grid.raw_width) fail(line_no, "field x out of range [0, " + std::to_string(grid.raw_width) + ")");
  if (v[4] >= grid.raw_height) fail(line_no, "field y out of range [0, " + std::to_string(grid.raw_height) + ")");
  return {v[0], static_cast<std::uint32_t>(v[1]), static_cast<std::uint32_t>(v[2]),
          static_cast<std::uint32_t>(v[3]), static_cast<std::uint32_t>(v[4])};
}

}  // namespace

void for_each_record(std::istream& in, const GridSpec& grid,
                     const std::function<void(const TrajectoryRecord&)>& sink) {
  grid.validate();
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError("line 1: missing header `uid,d,t,x,y`");
  ++line_no;
  std::string_view header = trim_eol(line);
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  if (header != "uid,d,t,x,y") throw DataError("line 1: expected header `uid,d,t,x,y`");
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim_eol(line);
    if (row.empty()) continue;
    sink(parse_row(row, line_no, grid));
  }
}

std::vector<TrajectoryRecord> parse_records(std::istream& in, const GridSpec& grid) {
  std::vector<TrajectoryRecord> out;
  for_each_record(in, grid, [&](const TrajectoryRecord& r) { out.push_back(r); });
  return out;
}

void write_records(std::ostream& out, std::span<const TrajectoryRecord> records) {
  out << "uid,d,t,x,y\n";
  std::string buf;
  for (const auto& r : records) {
    buf.clear();
    buf += std::to_string(r.uid);
    buf += ',';
    buf += std::to_string(r.day);
    buf += ',';
    buf += std::to_string(r.timeslot);
    buf += ',';
    buf += std::to_string(r.x);
    buf += ',';
    buf += std::to_string(r.y);
    buf += '\n';
    out << buf;
  }
}

std::span<const LocationId> VisitLog::visits(std::size_t ind, std::uint32_t day) const {
  const std::size_t slot = ind * horizon() + day;
  return std::span<const LocationId>(items_).subspan(offsets_[slot], offsets_[slot + 1] - offsets_[slot]);
}

std::span<const LocationId> VisitLog::visits_of(Uid uid, std::uint32_t abs_day) const {
  if (!days_.contains(abs_day)) return {};
  auto it = std::lower_bound(uids_.begin(), uids_.end(), uid);
  if (it == uids_.end() || *it != uid) return {};
  return visits(static_cast<std::size_t>(it - uids_.begin()), abs_day - days_.lo);
}

VisitLog VisitLog::slice(DayRange range) const {
  if (range.lo >= range.hi) throw DataError("empty day range");
  if (range.lo < days_.lo || range.hi > days_.hi) {
    throw DataError("day range [" + std::to_string(range.lo) + ", " + std::to_string(range.hi) +
                    ") outside log range [" + std::to_string(days_.lo) + ", " +
                    std::to_string(days_.hi) + ")");
  }
  VisitLog out;
  out.days_ = range;
  out.grid_ = grid_;
  out.offsets_.push_back(0);
  const std::uint32_t first = range.lo - days_.lo;
  for (std::size_t i = 0; i < uids_.size(); ++i) {
    const std::size_t begin = offsets_[i * horizon() + first];
    const std::size_t end = offsets_[i * horizon() + first + range.length()];
    if (begin == end) continue;
    out.uids_.push_back(uids_[i]);
    for (std::uint32_t d = 0; d < range.length(); ++d) {
      auto v = visits(i, first + d);
      out.items_.insert(out.items_.end(), v.begin(), v.end());
      out.offsets_.push_back(out.items_.size());
    }
  }
  return out;
}

VisitLogBuilder::VisitLogBuilder(GridDims grid, std::optional<DayRange> days)
    : grid_(grid), days_(days) {
  if (days_ && days_->lo >= days_->hi) throw DataError("empty day range");
}

void VisitLogBuilder::add(Uid uid, std::uint32_t abs_day, LocationId loc) {
  if (days_ && !days_->contains(abs_day)) return;
  if (loc >= grid_.cell_count()) throw DataError("location id " + std::to_string(loc) + " outside grid");
  entries_.push_back({uid, abs_day, loc});
  if (entries_.size() >= std::max<std::size_t>(1 << 20, 2 * compacted_size_)) compact();
}

void VisitLogBuilder::compact() {
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
  compacted_size_ = entries_.size();
}

VisitLog VisitLogBuilder::build() && {
  compact();
  DayRange range;
  if (days_) {
    range = *days_;
  } else {
    std::uint32_t max_day = 0;
    for (const auto& e : entries_) max_day = std::max(max_day, e.day);
    range = {0, entries_.empty() ? 1u : max_day + 1};
  }
  VisitLog log;
  log.days_ = range;
  log.grid_ = grid_;
  log.offsets_.push_back(0);
  log.items_.reserve(entries_.size());
  const std::uint32_t horizon = range.length();
  std::size_t i = 0;
  while (i < entries_.size()) {
    const Uid uid = entries_[i].uid;
    log.uids_.push_back(uid);
    for (std::uint32_t d = 0; d < horizon; ++d) {
      while (i < entries_.size() && entries_[i].uid == uid && entries_[i].day == range.lo + d) {
        log.items_.push_back(entries_[i].loc);
        ++i;
      }
      log.offsets_.push_back(log.items_.size());
    }
  }
  entries_.clear();
  entries_.shrink_to_fit();
  return log;
}

VisitLog build_visit_log(std::span<const TrajectoryRecord> records, const GridSpec& grid,
                         DayRange days) {
  grid.validate();
  const GridDims dims = grid.aggregated();
  VisitLogBuilder builder(dims, days);
  for (const auto& r : records) {
    builder.add(r.uid, r.day, location_id(aggregate_cell(r.x, r.y, grid.scale), dims));
  }
  return std::move(builder).build();
}

VisitLog read_visit_log(std::istream& in, const GridSpec& grid, std::optional<DayRange> days) {
  grid.validate();
  const GridDims dims = grid.aggregated();
  VisitLogBuilder builder(dims, days);
  for_each_record(in, grid, [&](const TrajectoryRecord& r) {
    builder.add(r.uid, r.day, location_id(aggregate_cell(r.x, r.y, grid.scale), dims));
  });
  return std::move(builder).build();
}

}  // namespace covis
