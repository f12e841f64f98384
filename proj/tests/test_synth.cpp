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

#include <sstream>

#include "covis/error.hpp"
#include "covis/synth.hpp"
#include "covis/transactions.hpp"
#include "test_util.hpp"

namespace covis {
namespace {

SynthSpec triple_spec(double adoption, double visit_prob, double background) {
  SynthSpec s;
  s.seed = 7;
  s.individuals = 1000;
  s.days = 14;
  s.background_rate = background;
  s.planted_groups = {{{{1, 1}, {5, 2}, {8, 8}}, adoption, visit_prob}};
  return s;
}

std::vector<LocationId> group_ids(const SynthSpec& s, std::size_t g) {
  std::vector<LocationId> ids;
  for (auto l : s.planted_groups[g].locations) ids.push_back(location_id(l, s.grid.aggregated()));
  std::sort(ids.begin(), ids.end());
  return ids;
}

TEST(Generate, DeterministicInSeed) {
  const SynthSpec s = triple_spec(0.3, 0.9, 1.0);
  const auto a = generate(s);
  const auto b = generate(s);
  EXPECT_EQ(a.log, b.log);
  EXPECT_EQ(a.adopters, b.adopters);
  SynthSpec other = s;
  other.seed = 8;
  EXPECT_FALSE(generate(other).log == a.log);
}

TEST(Generate, AdopterCountIsRounded) {
  const SynthSpec s = triple_spec(0.3, 0.9, 1.0);
  const auto out = generate(s);
  ASSERT_EQ(out.adopters.size(), 1u);
  EXPECT_EQ(out.adopters[0].size(), 300u);
  EXPECT_TRUE(std::is_sorted(out.adopters[0].begin(), out.adopters[0].end()));
}

TEST(Generate, CertainGroupHasFullSupport) {
  const SynthSpec s = triple_spec(1.0, 1.0, 0.0);
  const auto out = generate(s);
  const auto ds = build_transactions(out.log, 1);
  ASSERT_EQ(ds.size(), 14u * 1000u);
  const auto ids = group_ids(s, 0);
  EXPECT_EQ(testing::count_containing(ds, ids), ds.size());
  EXPECT_EQ(expected_support(s, out, 0, 1), 1.0);
}

TEST(Generate, PlantedSupportMatchesDirectCount) {
  const SynthSpec s = triple_spec(0.3, 0.9, 1.0);
  const auto out = generate(s);
  const auto ds = build_transactions(out.log, 3);
  const double support = static_cast<double>(testing::count_containing(ds, group_ids(s, 0))) /
                         static_cast<double>(ds.size());
  EXPECT_GE(support, 0.25);
  EXPECT_NEAR(expected_support(s, out, 0, 3), 0.3 * (1 - 0.1 * 0.1 * 0.1), 1e-12);
}

TEST(Generate, BackgroundRateIsPoissonMean) {
  SynthSpec s = triple_spec(0.0, 0.0, 2.0);
  s.grid = GridSpec{100, 100, 1};
  const auto out = generate(s);
  // Distinct cells per individual-day on a 10^4 grid barely collide.
  const double mean = static_cast<double>(out.log.visit_count()) / (1000.0 * 14.0);
  EXPECT_NEAR(mean, 2.0, 0.05);
}

TEST(SynthRecords, RoundTripThroughCsv) {
  SynthSpec s = triple_spec(0.3, 0.9, 1.0);
  s.grid = GridSpec{100, 100, 10};
  s.individuals = 200;
  const auto out = generate(s);
  std::stringstream csv;
  write_records(csv, synth_records(s, out.log));
  const VisitLog back = read_visit_log(csv, s.grid, DayRange{0, s.days});
  EXPECT_EQ(back, out.log);
}

TEST(ParseSynthSpec, ReadsAllFields) {
  const auto doc = nlohmann::json::parse(R"({
    "seed": 11, "grid": {"width": 40, "height": 20, "scale": 2},
    "individuals": 50, "days": 5, "background_rate": 0.5,
    "planted_groups": [{"locations": [[0, 0], [3, 4]], "adoption": 0.2, "visit_prob": 0.7}]})");
  const SynthSpec s = parse_synth_spec(doc);
  EXPECT_EQ(s.seed, 11u);
  EXPECT_EQ(s.grid.aggregated(), (GridDims{20, 10}));
  EXPECT_EQ(s.individuals, 50u);
  EXPECT_EQ(s.days, 5u);
  ASSERT_EQ(s.planted_groups.size(), 1u);
  EXPECT_EQ(s.planted_groups[0].locations[1], (Location{3, 4}));
  EXPECT_EQ(s.planted_groups[0].visit_prob, 0.7);
}

TEST(ParseSynthSpec, ErrorsNameTheField) {
  const auto expect_error = [](const std::string& text, const std::string& path) {
    try {
      parse_synth_spec(nlohmann::json::parse(text));
      ADD_FAILURE() << "no error for " << text;
    } catch (const DataError& e) {
      EXPECT_NE(std::string(e.what()).find(path), std::string::npos) << e.what();
    }
  };
  const std::string base = R"("grid": {"width": 10, "height": 10}, "individuals": 5, "days": 3)";
  expect_error("{" + base + R"(, "background_rate": -1})", "background_rate");
  expect_error("{" + base + R"(, "background_rate": 1, "planted_groups": [{"locations": [[0,0]], "adoption": 1.5, "visit_prob": 0.5}]})",
               "planted_groups[0].adoption");
  expect_error("{" + base + R"(, "background_rate": 1, "planted_groups": [{"locations": [[0,0],[10,0]], "adoption": 0.5, "visit_prob": 0.5}]})",
               "planted_groups[0].locations[1]");
  expect_error(R"({"grid": {"width": 10, "height": 10}, "days": 3, "background_rate": 1})", "individuals");
  expect_error(R"({"grid": {"width": 10}, "individuals": 5, "days": 3, "background_rate": 1})", "grid.height");
}

}  // namespace
}  // namespace covis
