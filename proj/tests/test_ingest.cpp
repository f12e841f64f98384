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

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "covis/error.hpp"
#include "covis/ingest.hpp"
#include "test_util.hpp"

namespace covis {
namespace {

const GridSpec kGrid{200, 200, 10};

TEST(ParseRecords, SingleRow) {
  std::istringstream in("uid,d,t,x,y\n0,0,9,137,42");
  auto recs = parse_records(in, kGrid);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0], (TrajectoryRecord{0, 0, 9, 137, 42}));
}

TEST(ParseRecords, HeaderOnlyIsEmpty) {
  std::istringstream in("uid,d,t,x,y\n");
  EXPECT_TRUE(parse_records(in, kGrid).empty());
}

TEST(ParseRecords, CrlfAndOrderPreserved) {
  std::istringstream in("uid,d,t,x,y\r\n5,1,0,1,1\r\n2,0,47,199,0\r\n");
  auto recs = parse_records(in, kGrid);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].uid, 5u);
  EXPECT_EQ(recs[1], (TrajectoryRecord{2, 0, 47, 199, 0}));
}

std::string error_of(const std::string& csv) {
  std::istringstream in(csv);
  try {
    parse_records(in, kGrid);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseRecords, TimeslotOutOfRange) {
  const auto msg = error_of("uid,d,t,x,y\n0,0,99,1,1\n");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("field t"), std::string::npos) << msg;
}

TEST(ParseRecords, CoordinateOutOfRangeNamesField) {
  EXPECT_NE(error_of("uid,d,t,x,y\n0,0,1,200,1\n").find("field x"), std::string::npos);
  EXPECT_NE(error_of("uid,d,t,x,y\n0,0,1,1,1\n0,0,1,1,250\n").find("line 3: field y"), std::string::npos);
}

TEST(ParseRecords, MalformedRows) {
  EXPECT_NE(error_of("uid,d,t,x,y\n0,0,1,1\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("uid,d,t,x,y\n0,0,a,1,1\n").find("field t"), std::string::npos);
  EXPECT_NE(error_of("uid,d,t,x,y\n-1,0,1,1,1\n").find("field uid"), std::string::npos);
  EXPECT_NE(error_of("uid,d,t,x,y\n0,0,1,1,1,7\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("user,day\n").find("line 1"), std::string::npos);
}

TEST(AggregateCell, FloorDivision) {
  EXPECT_EQ(aggregate_cell(137, 42, 10), (Location{13, 4}));
  EXPECT_EQ(aggregate_cell(0, 0, 10), (Location{0, 0}));
  EXPECT_EQ(aggregate_cell(199, 199, 10), (Location{19, 19}));
  EXPECT_EQ(aggregate_cell(7, 3, 1), (Location{7, 3}));
}

TEST(GridSpec, AggregatedDimsRoundUp) {
  EXPECT_EQ((GridSpec{200, 200, 10}.aggregated()), (GridDims{20, 20}));
  EXPECT_EQ((GridSpec{201, 15, 10}.aggregated()), (GridDims{21, 2}));
  EXPECT_THROW((GridSpec{10, 10, 0}.validate()), UsageError);
}

TEST(LocationId, RowMajorBijection) {
  const GridDims dims{20, 20};
  for (LocationId id = 0; id < dims.cell_count(); ++id) {
    EXPECT_EQ(location_id(location_of(id, dims), dims), id);
  }
  EXPECT_EQ(location_id({3, 2}, dims), 43u);
}

TEST(BuildVisitLog, ToyFixtureMatchesPaperSets) {
  std::ifstream in(testing::fixture("fig1_toy.csv"));
  const GridSpec grid{30, 30, 10};
  auto recs = parse_records(in, grid);
  const VisitLog log = build_visit_log(recs, grid, {0, 1});
  ASSERT_EQ(log.individual_count(), 3u);
  // l1 l2 l4 l5 -> ids 0 1 3 4 on the 3x3 grid.
  auto u1 = log.visits_of(1, 0);
  EXPECT_EQ(std::vector<LocationId>(u1.begin(), u1.end()), (std::vector<LocationId>{0, 1, 3, 4}));
  auto u2 = log.visits_of(2, 0);
  EXPECT_EQ(std::vector<LocationId>(u2.begin(), u2.end()), (std::vector<LocationId>{3, 4, 5, 6}));
  auto u3 = log.visits_of(3, 0);
  EXPECT_EQ(std::vector<LocationId>(u3.begin(), u3.end()), (std::vector<LocationId>{3, 7}));
}

TEST(BuildVisitLog, DayRangeFiltersAndRebases) {
  std::vector<TrajectoryRecord> recs = {{1, 0, 0, 5, 5}, {1, 3, 0, 15, 5}, {2, 4, 0, 5, 15}, {3, 9, 0, 1, 1}};
  const VisitLog log = build_visit_log(recs, kGrid, {3, 5});
  EXPECT_EQ(log.horizon(), 2u);
  EXPECT_EQ(log.individual_count(), 2u);
  EXPECT_EQ(log.visits_of(1, 3).size(), 1u);
  EXPECT_EQ(log.visits_of(1, 0).size(), 0u);
  EXPECT_EQ(log.visits_of(3, 9).size(), 0u);
}

TEST(BuildVisitLog, RepeatedVisitsCollapse) {
  std::vector<TrajectoryRecord> recs;
  for (std::uint32_t t = 0; t < 10; ++t) recs.push_back({7, 0, t, 12, 13});
  const VisitLog log = build_visit_log(recs, kGrid, {0, 1});
  EXPECT_EQ(log.visits_of(7, 0).size(), 1u);
}

std::vector<TrajectoryRecord> random_records(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::vector<TrajectoryRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({rng() % 20, static_cast<std::uint32_t>(rng() % 6), static_cast<std::uint32_t>(rng() % 48),
                   static_cast<std::uint32_t>(rng() % 200), static_cast<std::uint32_t>(rng() % 200)});
  }
  return out;
}

TEST(BuildVisitLogProperty, DuplicationAndPermutationInvariant) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto recs = random_records(seed, 300);
    const VisitLog base = build_visit_log(recs, kGrid, {0, 6});

    auto doubled = recs;
    doubled.insert(doubled.end(), recs.begin(), recs.end());
    EXPECT_EQ(build_visit_log(doubled, kGrid, {0, 6}), base);

    std::mt19937_64 rng(seed + 1000);
    std::shuffle(recs.begin(), recs.end(), rng);
    EXPECT_EQ(build_visit_log(recs, kGrid, {0, 6}), base);
  }
}

TEST(AggregateCellProperty, ScalesCompose) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const auto x = static_cast<std::uint32_t>(rng() % 5000);
    const auto y = static_cast<std::uint32_t>(rng() % 5000);
    const auto s = static_cast<std::uint32_t>(1 + rng() % 20);
    const auto k = static_cast<std::uint32_t>(1 + rng() % 10);
    const Location fine = aggregate_cell(x, y, s);
    EXPECT_EQ(aggregate_cell(x, y, s * k), aggregate_cell(fine.cell_x, fine.cell_y, k));
  }
}

TEST(VisitLog, SliceEqualsFilteredBuild) {
  auto recs = random_records(99, 500);
  const VisitLog full = build_visit_log(recs, kGrid, {0, 6});
  EXPECT_EQ(full.slice({2, 5}), build_visit_log(recs, kGrid, {2, 5}));
  EXPECT_EQ(full.slice({0, 6}), full);
  EXPECT_THROW(full.slice({4, 8}), DataError);
}

TEST(ReadVisitLog, InfersHorizonFromData) {
  std::istringstream in("uid,d,t,x,y\n1,0,0,1,1\n1,4,0,1,1\n");
  const VisitLog log = read_visit_log(in, kGrid, std::nullopt);
  EXPECT_EQ(log.days(), (DayRange{0, 5}));
}

}  // namespace
}  // namespace covis
