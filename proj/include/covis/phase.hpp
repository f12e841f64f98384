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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "covis/hypergraph.hpp"
#include "covis/ingest.hpp"
#include "covis/miner.hpp"

namespace covis {

struct PhaseSpec {
  std::string label;
  DayRange days;
};

// Co-degree threshold and D-infinity restriction used for phase comparison.
inline constexpr std::size_t kHigherOrderMinSize = 3;

/// Full pipeline on the log restricted to the phase's days. Supports are
/// relative to the phase's own transaction count. Throws DataError when
/// the phase is shorter than \p delta_t or outside the log.
Hypergraph build_phase(const VisitLog& log, const PhaseSpec& phase, std::uint32_t delta_t,
                       const MiningParams& params, unsigned threads = 1);

struct CoDegreeDiff {
  std::vector<CoDegreeEdge> only_a;  // weights from a
  std::vector<CoDegreeEdge> only_b;  // weights from b
};

/// Pairs present in exactly one graph, each with its own weight.
CoDegreeDiff diff_co_degree(const CoDegreeGraph& a, const CoDegreeGraph& b);

struct PhaseSummary {
  std::uint64_t transactions = 0;
  std::size_t edge_count = 0;
  std::map<std::size_t, std::size_t> size_histogram;
  std::optional<std::uint32_t> d_inf;  // absent without qualifying edges
};

struct ComparisonCell {
  std::uint32_t delta_t = 0;
  double min_sup = 0.0;
  PhaseSummary a;
  PhaseSummary b;
  CoDegreeDiff unique;
};

struct ComparisonReport {
  PhaseSpec a;
  PhaseSpec b;
  std::uint32_t min_size = 0;
  std::size_t min_edge_size = kHigherOrderMinSize;
  std::vector<ComparisonCell> cells;  // delta_t major, min_sup minor, input order
};

struct CompareOptions {
  std::vector<std::uint32_t> delta_ts;
  std::vector<double> min_sups;
  std::uint32_t min_size = 2;
  std::size_t min_edge_size = kHigherOrderMinSize;
  bool maximal_only = false;
  unsigned threads = 1;
};

/// Throws UsageError for overlapping phases or empty grids and DataError
/// when a phase cannot hold the largest window.
ComparisonReport compare_phases(const VisitLog& log, const PhaseSpec& a, const PhaseSpec& b,
                                const CompareOptions& options);

nlohmann::json to_json(const ComparisonReport& report);

}  // namespace covis
