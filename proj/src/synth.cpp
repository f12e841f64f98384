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

#include "covis/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "covis/error.hpp"
#include "covis/format.hpp"
#include "covis/random.hpp"

namespace covis {

namespace {

constexpr std::uint64_t kRecordStreamSalt = 0x9e3779b97f4a7c15ULL;

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw DataError(path + ": " + what);
}

const nlohmann::json& require(const nlohmann::json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path + key, "missing");
  return *it;
}

std::uint64_t get_uint(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    field_error(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double get_double(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  return v.get<double>();
}

}  // namespace

void SynthSpec::validate() const {
  if (grid.raw_width == 0) field_error("grid.width", "must be positive");
  if (grid.raw_height == 0) field_error("grid.height", "must be positive");
  if (grid.scale == 0) field_error("grid.scale", "must be >= 1");
  if (individuals == 0) field_error("individuals", "must be positive");
  if (days == 0) field_error("days", "must be positive");
  if (!(background_rate >= 0.0 && background_rate <= kMaxBackgroundRate)) {
    field_error("background_rate", "must be in [0, " + format_double(kMaxBackgroundRate) + "]");
  }
  const GridDims dims = grid.aggregated();
  for (std::size_t g = 0; g < planted_groups.size(); ++g) {
    const std::string path = "planted_groups[" + std::to_string(g) + "]";
    const auto& pg = planted_groups[g];
    if (pg.locations.empty()) field_error(path + ".locations", "must not be empty");
    for (std::size_t i = 0; i < pg.locations.size(); ++i) {
      if (pg.locations[i].cell_x >= dims.width || pg.locations[i].cell_y >= dims.height) {
        field_error(path + ".locations[" + std::to_string(i) + "]", "outside the aggregated grid");
      }
    }
    if (!(pg.adoption >= 0.0 && pg.adoption <= 1.0)) field_error(path + ".adoption", "must be in [0, 1]");
    if (!(pg.visit_prob >= 0.0 && pg.visit_prob <= 1.0)) field_error(path + ".visit_prob", "must be in [0, 1]");
  }
}

SynthSpec parse_synth_spec(const nlohmann::json& doc) {
  if (!doc.is_object()) field_error("$", "expected a JSON object");
  SynthSpec spec;
  if (doc.contains("seed")) spec.seed = get_uint(doc["seed"], "seed");
  const auto& grid = require(doc, "grid", "");
  if (!grid.is_object()) field_error("grid", "expected an object");
  spec.grid.raw_width = static_cast<std::uint32_t>(get_uint(require(grid, "width", "grid."), "grid.width"));
  spec.grid.raw_height = static_cast<std::uint32_t>(get_uint(require(grid, "height", "grid."), "grid.height"));
  spec.grid.scale = grid.contains("scale") ? static_cast<std::uint32_t>(get_uint(grid["scale"], "grid.scale")) : 1;
  spec.individuals = static_cast<std::uint32_t>(get_uint(require(doc, "individuals", ""), "individuals"));
  spec.days = static_cast<std::uint32_t>(get_uint(require(doc, "days", ""), "days"));
  spec.background_rate = get_double(require(doc, "background_rate", ""), "background_rate");
  if (doc.contains("planted_groups")) {
    const auto& groups = doc["planted_groups"];
    if (!groups.is_array()) field_error("planted_groups", "expected an array");
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const std::string path = "planted_groups[" + std::to_string(g) + "]";
      const auto& jg = groups[g];
      if (!jg.is_object()) field_error(path, "expected an object");
      PlantedGroup pg;
      const auto& locs = require(jg, "locations", path + ".");
      if (!locs.is_array()) field_error(path + ".locations", "expected an array of [x, y]");
      for (std::size_t i = 0; i < locs.size(); ++i) {
        const std::string lp = path + ".locations[" + std::to_string(i) + "]";
        if (!locs[i].is_array() || locs[i].size() != 2) field_error(lp, "expected [x, y]");
        pg.locations.push_back({static_cast<std::uint32_t>(get_uint(locs[i][0], lp + "[0]")),
                                static_cast<std::uint32_t>(get_uint(locs[i][1], lp + "[1]"))});
      }
      pg.adoption = get_double(require(jg, "adoption", path + "."), path + ".adoption");
      pg.visit_prob = get_double(require(jg, "visit_prob", path + "."), path + ".visit_prob");
      spec.planted_groups.push_back(std::move(pg));
    }
  }
  spec.validate();
  return spec;
}

SynthOutput generate(const SynthSpec& spec) {
  spec.validate();
  const GridDims dims = spec.grid.aggregated();
  Rng rng(spec.seed);

  SynthOutput out;
  std::vector<std::vector<std::size_t>> groups_of(spec.individuals);
  std::vector<std::uint32_t> perm(spec.individuals);
  for (std::size_t g = 0; g < spec.planted_groups.size(); ++g) {
    const auto& pg = spec.planted_groups[g];
    const auto k = static_cast<std::size_t>(std::llround(pg.adoption * spec.individuals));
    std::iota(perm.begin(), perm.end(), 0u);
    // Partial Fisher-Yates: the first k entries are a uniform sample.
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(perm[i], perm[i + rng.uniform(spec.individuals - i)]);
    }
    std::vector<Uid> chosen(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(chosen.begin(), chosen.end());
    for (Uid u : chosen) groups_of[u].push_back(g);
    out.adopters.push_back(std::move(chosen));
  }

  std::vector<std::vector<LocationId>> group_ids;
  for (const auto& pg : spec.planted_groups) {
    std::vector<LocationId> ids;
    for (Location l : pg.locations) ids.push_back(location_id(l, dims));
    group_ids.push_back(std::move(ids));
  }

  VisitLogBuilder builder(dims, DayRange{0, spec.days});
  for (std::uint32_t u = 0; u < spec.individuals; ++u) {
    for (std::uint32_t d = 0; d < spec.days; ++d) {
      const std::uint64_t k = rng.poisson(spec.background_rate);
      for (std::uint64_t i = 0; i < k; ++i) {
        builder.add(u, d, static_cast<LocationId>(rng.uniform(dims.cell_count())));
      }
      for (std::size_t g : groups_of[u]) {
        if (!rng.bernoulli(spec.planted_groups[g].visit_prob)) continue;
        for (LocationId id : group_ids[g]) builder.add(u, d, id);
      }
    }
  }
  out.log = std::move(builder).build();
  return out;
}

double expected_support(const SynthSpec& spec, const SynthOutput& out, std::size_t group,
                        std::uint32_t delta_t) {
  const double adoption = static_cast<double>(out.adopters.at(group).size()) / spec.individuals;
  return adoption * (1.0 - std::pow(1.0 - spec.planted_groups.at(group).visit_prob, delta_t));
}

std::vector<TrajectoryRecord> synth_records(const SynthSpec& spec, const VisitLog& log) {
  const GridDims dims = log.grid();
  const std::uint32_t s = spec.grid.scale;
  Rng rng(spec.seed ^ kRecordStreamSalt);
  std::vector<TrajectoryRecord> out;
  out.reserve(log.visit_count());
  auto uids = log.individuals();
  for (std::size_t i = 0; i < uids.size(); ++i) {
    for (std::uint32_t d = 0; d < log.horizon(); ++d) {
      for (LocationId id : log.visits(i, d)) {
        const Location cell = location_of(id, dims);
        const std::uint32_t x0 = cell.cell_x * s;
        const std::uint32_t y0 = cell.cell_y * s;
        TrajectoryRecord r;
        r.uid = uids[i];
        r.day = log.days().lo + d;
        r.timeslot = static_cast<std::uint32_t>(rng.uniform(kSlotsPerDay));
        r.x = x0 + static_cast<std::uint32_t>(rng.uniform(std::min(s, spec.grid.raw_width - x0)));
        r.y = y0 + static_cast<std::uint32_t>(rng.uniform(std::min(s, spec.grid.raw_height - y0)));
        out.push_back(r);
      }
    }
  }
  return out;
}

nlohmann::json synth_manifest(const SynthSpec& spec, const SynthOutput& out) {
  const GridDims dims = spec.grid.aggregated();
  nlohmann::json groups = nlohmann::json::array();
  for (std::size_t g = 0; g < spec.planted_groups.size(); ++g) {
    const auto& pg = spec.planted_groups[g];
    nlohmann::json locs = nlohmann::json::array();
    nlohmann::json ids = nlohmann::json::array();
    for (Location l : pg.locations) {
      locs.push_back({l.cell_x, l.cell_y});
      ids.push_back(location_id(l, dims));
    }
    nlohmann::json support = nlohmann::json::object();
    for (std::uint32_t dt = 1; dt <= spec.days; ++dt) {
      support[std::to_string(dt)] = expected_support(spec, out, g, dt);
    }
    groups.push_back({{"locations", locs},
                      {"location_ids", ids},
                      {"adoption", pg.adoption},
                      {"adopters", out.adopters[g].size()},
                      {"visit_prob", pg.visit_prob},
                      {"expected_support", support}});
  }
  return {
      {"generator", "covis-synth"},
      {"rng", "mt19937_64"},
      {"format_version", 1},
      {"seed", spec.seed},
      {"grid", {{"width", spec.grid.raw_width}, {"height", spec.grid.raw_height}, {"scale", spec.grid.scale}}},
      {"individuals", spec.individuals},
      {"days", spec.days},
      {"background_rate", spec.background_rate},
      {"planted_groups", groups},
  };
}

}  // namespace covis
