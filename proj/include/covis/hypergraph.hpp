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
#include <vector>

#include "covis/ingest.hpp"
#include "covis/miner.hpp"

namespace covis {

struct Hyperedge {
  std::vector<LocationId> items;  // strictly ascending
  std::uint64_t count = 0;        // transactions containing the itemset
  double weight = 0.0;            // support fraction

  std::size_t size() const { return items.size(); }
  bool operator==(const Hyperedge&) const = default;
};

/// Weighted co-visitation hypergraph over grid locations.
///
/// The node set is either the whole grid (as built from patterns) or a
/// cropped subset (k-uniform extraction). Edges keep canonical pattern order.
class Hypergraph {
 public:
  Hypergraph() = default;
  // Throws DataError if an edge references a node outside `nodes`,
  // or edges repeat.
  Hypergraph(GridDims grid, std::vector<LocationId> nodes, std::vector<Hyperedge> edges);

  GridDims grid() const { return grid_; }
  std::span<const LocationId> nodes() const { return nodes_; }
  std::span<const Hyperedge> edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_node(LocationId v) const;
  // Position of v in nodes(); throws DataError for unknown nodes.
  std::size_t node_index(LocationId v) const;

  // Number of incident edges. Throws DataError for unknown nodes.
  std::size_t degree(LocationId v) const;
  // Degrees aligned with nodes().
  std::span<const std::size_t> degrees() const { return degrees_; }

  bool operator==(const Hypergraph& o) const {
    return grid_ == o.grid_ && nodes_ == o.nodes_ && edges_ == o.edges_;
  }

 private:
  GridDims grid_;
  std::vector<LocationId> nodes_;
  std::vector<Hyperedge> edges_;
  std::vector<std::size_t> degrees_;
};

/// One edge per pattern, weight = support; node set = every grid cell.
Hypergraph from_patterns(const PatternSet& patterns, GridDims grid);

/// Sparse boolean |V| x |E| matrix in compressed-row form. Row i is nodes()[i].
struct IncidenceMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_offsets;
  std::vector<std::uint32_t> col_indices;

  bool at(std::size_t row, std::size_t col) const;
  std::vector<std::size_t> row_sums() const;
  std::vector<std::size_t> col_sums() const;
  std::size_t nonzeros() const { return col_indices.size(); }
};

IncidenceMatrix incidence_matrix(const Hypergraph& hg);

// Largest edge size; 0 when there are no edges.
std::size_t rank(const Hypergraph& hg);

/// Edges of size exactly k; nodes cropped to those incident to them.
Hypergraph k_uniform_sub(const Hypergraph& hg, std::size_t k);

struct BipartiteEdge {
  LocationId node = 0;
  std::uint32_t edge = 0;
  bool operator==(const BipartiteEdge&) const = default;
};

// Ordered by edge index, then node id.
std::vector<BipartiteEdge> bipartite_export(const Hypergraph& hg);

struct CoDegreeEdge {
  LocationId u = 0;  // u < v
  LocationId v = 0;
  std::uint64_t weight = 0;
  bool operator==(const CoDegreeEdge&) const = default;
};

/// Pairwise co-degree over edges with at least `min_edge_size` nodes,
/// sorted by (u, v), zero weights omitted.
struct CoDegreeGraph {
  std::vector<CoDegreeEdge> edges;
  std::size_t min_edge_size = 0;

  std::uint64_t weight(LocationId a, LocationId b) const;
};

CoDegreeGraph co_degree_graph(const Hypergraph& hg, std::size_t min_edge_size);

/// `covis-hg v1 <grid_w> <grid_h> <n_edges>` then one pattern line per edge.
/// Only full-grid hypergraphs are representable.
void write_hypergraph(std::ostream& out, const Hypergraph& hg);
Hypergraph read_hypergraph(std::istream& in);

}  // namespace covis
