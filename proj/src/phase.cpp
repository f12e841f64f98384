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

#include "covis/phase.hpp"

#include <algorithm>
#include <string>

#include "covis/analysis.hpp"
#include "covis/error.hpp"
#include "covis/parallel.hpp"
#include "covis/pipeline.hpp"
#include "covis/transactions.hpp"

namespace covis {

namespace {

std::string describe(const PhaseSpec& p) {
  return "phase '" + p.label + "' [" + std::to_string(p.days.lo) + ", " + std::to_string(p.days.hi) + ")";
}

void check_fits(const PhaseSpec& phase, std::uint32_t delta_t) {
  if (phase.days.lo >= phase.days.hi) throw UsageError(describe(phase) + " is empty");
  if (phase.days.length() < delta_t) {
    throw DataError(describe(phase) + " is shorter than window length " + std::to_string(delta_t));
  }
}

PhaseSummary summarize(const HypergraphBuild& build, std::size_t min_edge_size) {
  PhaseSummary s;
  s.transactions = build.patterns.transactions;
  s.edge_count = build.hypergraph.edge_count();
  s.size_histogram = hyperedge_size_histogram(build.hypergraph);
  try {
    s.d_inf = max_chebyshev(build.hypergraph, min_edge_size);
  } catch (const NoQualifyingEdges&) {
    s.d_inf.reset();
  }
  return s;
}

nlohmann::json edges_json(const std::vector<CoDegreeEdge>& edges) {
  auto arr = nlohmann::json::array();
  for (const auto& e : edges) arr.push_back({{"u", e.u}, {"v", e.v}, {"weight", e.weight}});
  return arr;
}

nlohmann::json summary_json(const PhaseSummary& s) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [size, count] : s.size_histogram) hist[std::to_string(size)] = count;
  nlohmann::json j = {{"transactions", s.transactions}, {"edges", s.edge_count}, {"size_histogram", hist}};
  j["d_inf"] = s.d_inf ? nlohmann::json(*s.d_inf) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

Hypergraph build_phase(const VisitLog& log, const PhaseSpec& phase, std::uint32_t delta_t,
                       const MiningParams& params, unsigned threads) {
  check_fits(phase, delta_t);
  const VisitLog sliced = log.slice(phase.days);
  return build_hypergraph(sliced, delta_t, params, false, threads).hypergraph;
}

CoDegreeDiff diff_co_degree(const CoDegreeGraph& a, const CoDegreeGraph& b) {
  auto key_less = [](const CoDegreeEdge& x, const CoDegreeEdge& y) {
    return std::pair{x.u, x.v} < std::pair{y.u, y.v};
  };
  CoDegreeDiff d;
  std::set_difference(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
                      std::back_inserter(d.only_a), key_less);
  std::set_difference(b.edges.begin(), b.edges.end(), a.edges.begin(), a.edges.end(),
                      std::back_inserter(d.only_b), key_less);
  return d;
}

ComparisonReport compare_phases(const VisitLog& log, const PhaseSpec& a, const PhaseSpec& b,
                                const CompareOptions& options) {
  if (options.delta_ts.empty() || options.min_sups.empty()) {
    throw UsageError("comparison needs at least one window length and one min_sup");
  }
  if (a.label == b.label) throw UsageError("phase labels must differ");
  if (a.days.overlaps(b.days)) throw UsageError(describe(a) + " overlaps " + describe(b));
  const std::uint32_t max_dt = *std::max_element(options.delta_ts.begin(), options.delta_ts.end());
  check_fits(a, max_dt);
  check_fits(b, max_dt);
  for (double s : options.min_sups) MiningParams{s, options.min_size}.validate();

  const VisitLog logs[2] = {log.slice(a.days), log.slice(b.days)};
  const std::size_t n_dt = options.delta_ts.size();
  const std::size_t n_sup = options.min_sups.size();

  std::vector<TransactionDataset> datasets(2 * n_dt);
  parallel_for(datasets.size(), options.threads, [&](std::size_t job) {
    datasets[job] = build_transactions(logs[job / n_dt], options.delta_ts[job % n_dt]);
  });

  // Job index = (phase * n_dt + dt) * n_sup + sup.
  std::vector<HypergraphBuild> builds(2 * n_dt * n_sup);
  parallel_for(builds.size(), options.threads, [&](std::size_t job) {
    const MiningParams params{options.min_sups[job % n_sup], options.min_size};
    builds[job] = build_hypergraph(datasets[job / n_sup], log.grid(), params, options.maximal_only);
  });

  ComparisonReport report;
  report.a = a;
  report.b = b;
  report.min_size = options.min_size;
  report.min_edge_size = options.min_edge_size;
  for (std::size_t dt = 0; dt < n_dt; ++dt) {
    for (std::size_t sup = 0; sup < n_sup; ++sup) {
      const HypergraphBuild& ba = builds[(0 * n_dt + dt) * n_sup + sup];
      const HypergraphBuild& bb = builds[(1 * n_dt + dt) * n_sup + sup];
      ComparisonCell cell;
      cell.delta_t = options.delta_ts[dt];
      cell.min_sup = options.min_sups[sup];
      cell.a = summarize(ba, options.min_edge_size);
      cell.b = summarize(bb, options.min_edge_size);
      cell.unique = diff_co_degree(co_degree_graph(ba.hypergraph, options.min_edge_size),
                                   co_degree_graph(bb.hypergraph, options.min_edge_size));
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

nlohmann::json to_json(const ComparisonReport& report) {
  auto phase_json = [](const PhaseSpec& p) {
    return nlohmann::json{{"label", p.label}, {"days", {p.days.lo, p.days.hi}}};
  };
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    cells.push_back({
        {"delta_t", c.delta_t},
        {"min_sup", c.min_sup},
        {"phases", {{report.a.label, summary_json(c.a)}, {report.b.label, summary_json(c.b)}}},
        {"unique_co_degree",
         {{report.a.label, edges_json(c.unique.only_a)}, {report.b.label, edges_json(c.unique.only_b)}}},
    });
  }
  return {
      {"phases", {phase_json(report.a), phase_json(report.b)}},
      {"min_size", report.min_size},
      {"min_edge_size", report.min_edge_size},
      {"cells", cells},
  };
}

}  // namespace covis
