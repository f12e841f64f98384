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
#include <vector>

#include <nlohmann/json.hpp>

#include "covis/ingest.hpp"

namespace covis {

struct PlantedGroup {
  std::vector<Location> locations;  // aggregated cells
  double adoption = 0.0;            // fraction of individuals that adopt
  double visit_prob = 0.0;          // per-day probability of a joint visit
};

struct SynthSpec {
  std::uint64_t seed = 1;
  GridSpec grid{10, 10, 1};
  std::uint32_t individuals = 100;
  std::uint32_t days = 7;
  double background_rate = 1.0;  // expected uniform background visits per individual-day
  std::vector<PlantedGroup> planted_groups;

  // Throws DataError naming the offending field path.
  void validate() const;
};

inline constexpr double kMaxBackgroundRate = 100.0;

/// Parses the JSON spec document; errors carry a field path such as
/// `planted_groups[0].adoption`.
SynthSpec parse_synth_spec(const nlohmann::json& doc);

struct SynthOutput {
  VisitLog log;
  // Adopting uids per planted group, ascending.
  std::vector<std::vector<Uid>> adopters;
};

/// Each day an individual makes Poisson(background_rate) visits to uniform
/// cells; each adopter of a group visits all of its cells together with
/// probability visit_prob. Exactly round(adoption * individuals) adopters
/// per group. Deterministic in the seed.
SynthOutput generate(const SynthSpec& spec);

// adoption * (1 - (1 - visit_prob)^delta_t), using the realized adopter count.
double expected_support(const SynthSpec& spec, const SynthOutput& out, std::size_t group,
                        std::uint32_t delta_t);

/// One ping per (uid, day, cell) with a seeded timeslot and raw position
/// inside the cell. Re-ingesting with the spec's grid reproduces the log.
std::vector<TrajectoryRecord> synth_records(const SynthSpec& spec, const VisitLog& log);

nlohmann::json synth_manifest(const SynthSpec& spec, const SynthOutput& out);

}  // namespace covis
