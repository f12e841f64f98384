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
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "covis/hypergraph.hpp"
#include "covis/ingest.hpp"

namespace covis {

struct CcdfPoint {
  std::size_t k = 0;
  double p = 0.0;  // P(degree >= k)
  bool operator==(const CcdfPoint&) const = default;
};

/// P(degree >= k) over every node of the hypergraph (zero-degree nodes
/// included), for k = 0 .. max degree + 1.
std::vector<CcdfPoint> degree_ccdf(const Hypergraph& hg);

// Degrees of nodes with at least one incident edge, in node order.
std::vector<std::uint64_t> positive_degrees(const Hypergraph& hg);

/// Discrete maximum-likelihood fits on values >= xmin.
///
/// Exponential: P(k) = (1 - e^-lambda) e^{-lambda (k - xmin)}.
/// Power law:   P(k) = k^-alpha / zeta(alpha, xmin).
/// llr = loglik(exponential) - loglik(power law); positive favors exponential.
struct FitResult {
  enum class Family { kExponential, kPowerLaw };

  Family best = Family::kExponential;
  std::uint64_t xmin = 1;
  std::size_t n = 0;
  double lambda = 0.0;
  double exp_loglik = 0.0;
  double alpha = 0.0;
  double pl_loglik = 0.0;
  double llr = 0.0;
};

inline constexpr std::size_t kMinFitSamples = 10;

// Throws DataError with fewer than 10 samples at or above xmin, or when all
// samples are equal.
FitResult fit_degree_distribution(std::span<const std::uint64_t> values, std::uint64_t xmin = 1);

// Hurwitz zeta: sum over k >= 0 of (q + k)^-s, for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

// Edge size -> number of edges.
std::map<std::size_t, std::size_t> hyperedge_size_histogram(const Hypergraph& hg);

inline std::uint32_t chebyshev(Location a, Location b) {
  const std::uint32_t dx = a.cell_x > b.cell_x ? a.cell_x - b.cell_x : b.cell_x - a.cell_x;
  const std::uint32_t dy = a.cell_y > b.cell_y ? a.cell_y - b.cell_y : b.cell_y - a.cell_y;
  return dx > dy ? dx : dy;
}

// Max pairwise Chebyshev distance within one edge.
std::uint32_t edge_chebyshev(const Hyperedge& e, GridDims grid);

/// Max edge span over edges with at least \p min_edge_size nodes.
/// Throws NoQualifyingEdges when no edge qualifies.
std::uint32_t max_chebyshev(const Hypergraph& hg, std::size_t min_edge_size);

struct DegreeGrid {
  GridDims dims;
  std::vector<std::size_t> cells;  // row-major: cells[y * width + x]
  std::size_t max_degree = 0;

  std::size_t at(std::uint32_t x, std::uint32_t y) const { return cells[y * dims.width + x]; }
};

DegreeGrid degree_heatmap(const Hypergraph& hg);

// Aggregated location id -> total POI count.
using PoiTable = std::map<LocationId, std::uint64_t>;

/// Reads CSV `x,y,category,count` on the raw grid and sums counts per
/// aggregated cell.
PoiTable read_poi_table(std::istream& in, const GridSpec& grid);

struct PowerLawFit {
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

/// Least squares of log y on log x; y = a x^b. Pairs with a non-positive
/// coordinate are dropped. Throws DataError with fewer than 3 usable pairs
/// or when all x coincide.
PowerLawFit fit_power_law_loglog(std::span<const double> x, std::span<const double> y);

// Degree (y) against total POI count (x) per location.
PowerLawFit poi_degree_fit(const PoiTable& poi, const Hypergraph& hg);

void write_ccdf_csv(std::ostream& out, std::span<const CcdfPoint> ccdf);
void write_size_csv(std::ostream& out, const std::map<std::size_t, std::size_t>& sizes);
void write_heatmap_csv(std::ostream& out, const DegreeGrid& grid);

nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const PowerLawFit& fit);

}  // namespace covis
