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

#include "covis/hypergraph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>

#include "covis/error.hpp"
#include "covis/format.hpp"

namespace covis {

Hypergraph::Hypergraph(GridDims grid, std::vector<LocationId> nodes, std::vector<Hyperedge> edges)
    : grid_(grid), nodes_(std::move(nodes)), edges_(std::move(edges)), degrees_(nodes_.size(), 0) {
  if (!std::is_sorted(nodes_.begin(), nodes_.end()) ||
      std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw DataError("hypergraph node ids must be strictly ascending");
  }
  for (LocationId v : nodes_) {
    if (v >= grid_.cell_count()) throw DataError("node " + std::to_string(v) + " outside grid");
  }
  std::set<std::vector<LocationId>> seen;
  for (const auto& e : edges_) {
    if (e.items.empty()) throw DataError("empty hyperedge");
    if (!seen.insert(e.items).second) throw DataError("duplicate hyperedge");
    for (std::size_t i = 0; i < e.items.size(); ++i) {
      if (i > 0 && e.items[i] <= e.items[i - 1]) throw DataError("hyperedge items must be strictly ascending");
      if (!has_node(e.items[i])) {
        throw DataError("hyperedge references node " + std::to_string(e.items[i]) + " not in the node set");
      }
      ++degrees_[node_index(e.items[i])];
    }
  }
}

bool Hypergraph::has_node(LocationId v) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

std::size_t Hypergraph::node_index(LocationId v) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v);
  if (it == nodes_.end() || *it != v) throw DataError("unknown node " + std::to_string(v));
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t Hypergraph::degree(LocationId v) const { return degrees_[node_index(v)]; }

Hypergraph from_patterns(const PatternSet& patterns, GridDims grid) {
  std::vector<LocationId> nodes(grid.cell_count());
  std::iota(nodes.begin(), nodes.end(), 0u);
  std::vector<Hyperedge> edges;
  edges.reserve(patterns.size());
  for (const auto& p : patterns.patterns) {
    for (LocationId id : p.items) {
      if (id >= grid.cell_count()) throw DataError("pattern item " + std::to_string(id) + " outside grid");
    }
    edges.push_back({p.items, p.count, patterns.support(p)});
  }
  return Hypergraph(grid, std::move(nodes), std::move(edges));
}

bool IncidenceMatrix::at(std::size_t row, std::size_t col) const {
  auto begin = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[row]);
  auto end = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[row + 1]);
  return std::binary_search(begin, end, static_cast<std::uint32_t>(col));
}

std::vector<std::size_t> IncidenceMatrix::row_sums() const {
  std::vector<std::size_t> out(rows);
  for (std::size_t i = 0; i < rows; ++i) out[i] = row_offsets[i + 1] - row_offsets[i];
  return out;
}

std::vector<std::size_t> IncidenceMatrix::col_sums() const {
  std::vector<std::size_t> out(cols, 0);
  for (std::uint32_t c : col_indices) ++out[c];
  return out;
}

IncidenceMatrix incidence_matrix(const Hypergraph& hg) {
  IncidenceMatrix m;
  m.rows = hg.node_count();
  m.cols = hg.edge_count();
  m.row_offsets.assign(m.rows + 1, 0);
  auto deg = hg.degrees();
  for (std::size_t i = 0; i < m.rows; ++i) m.row_offsets[i + 1] = m.row_offsets[i] + deg[i];
  m.col_indices.resize(m.row_offsets.back());
  std::vector<std::size_t> fill(m.row_offsets.begin(), m.row_offsets.end() - 1);
  // Edges visited in order, so each row's columns come out ascending.
  for (std::uint32_t j = 0; j < hg.edge_count(); ++j) {
    for (LocationId v : hg.edges()[j].items) m.col_indices[fill[hg.node_index(v)]++] = j;
  }
  return m;
}

std::size_t rank(const Hypergraph& hg) {
  std::size_t r = 0;
  for (const auto& e : hg.edges()) r = std::max(r, e.size());
  return r;
}

Hypergraph k_uniform_sub(const Hypergraph& hg, std::size_t k) {
  if (k < 1) throw UsageError("k must be >= 1");
  std::vector<Hyperedge> edges;
  std::vector<LocationId> nodes;
  for (const auto& e : hg.edges()) {
    if (e.size() != k) continue;
    edges.push_back(e);
    nodes.insert(nodes.end(), e.items.begin(), e.items.end());
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return Hypergraph(hg.grid(), std::move(nodes), std::move(edges));
}

std::vector<BipartiteEdge> bipartite_export(const Hypergraph& hg) {
  std::vector<BipartiteEdge> out;
  for (std::uint32_t j = 0; j < hg.edge_count(); ++j) {
    for (LocationId v : hg.edges()[j].items) out.push_back({v, j});
  }
  return out;
}

std::uint64_t CoDegreeGraph::weight(LocationId a, LocationId b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{a, b},
                             [](const CoDegreeEdge& e, const std::pair<LocationId, LocationId>& key) {
                               return std::pair{e.u, e.v} < key;
                             });
  if (it == edges.end() || it->u != a || it->v != b) return 0;
  return it->weight;
}

CoDegreeGraph co_degree_graph(const Hypergraph& hg, std::size_t min_edge_size) {
  if (min_edge_size < 2) throw UsageError("co-degree min edge size must be >= 2");
  std::unordered_map<std::uint64_t, std::uint64_t> acc;
  for (const auto& e : hg.edges()) {
    if (e.size() < min_edge_size) continue;
    for (std::size_t i = 0; i < e.items.size(); ++i) {
      for (std::size_t j = i + 1; j < e.items.size(); ++j) {
        ++acc[(static_cast<std::uint64_t>(e.items[i]) << 32) | e.items[j]];
      }
    }
  }
  CoDegreeGraph g;
  g.min_edge_size = min_edge_size;
  g.edges.reserve(acc.size());
  for (const auto& [key, w] : acc) {
    g.edges.push_back({static_cast<LocationId>(key >> 32), static_cast<LocationId>(key & 0xffffffffu), w});
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const CoDegreeEdge& a, const CoDegreeEdge& b) { return std::pair{a.u, a.v} < std::pair{b.u, b.v}; });
  return g;
}

void write_hypergraph(std::ostream& out, const Hypergraph& hg) {
  if (hg.node_count() != hg.grid().cell_count()) {
    throw DataError("only full-grid hypergraphs can be serialized");
  }
  out << "covis-hg v1 " << hg.grid().width << ' ' << hg.grid().height << ' ' << hg.edge_count() << '\n';
  std::string line;
  for (const auto& e : hg.edges()) {
    line = std::to_string(e.size());
    line += '\t';
    line += format_double(e.weight);
    line += '\t';
    line += std::to_string(e.count);
    line += '\t';
    for (std::size_t i = 0; i < e.items.size(); ++i) {
      if (i) line += ' ';
      line += std::to_string(e.items[i]);
    }
    line += '\n';
    out << line;
  }
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

Hypergraph read_hypergraph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty hypergraph file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto head = split(line, ' ');
  if (head.size() != 5 || head[0] != "covis-hg" || head[1] != "v1") {
    throw DataError("line 1: expected `covis-hg v1 <grid_w> <grid_h> <n_edges>`");
  }
  const GridDims grid{static_cast<std::uint32_t>(parse_uint(head[2], "grid width")),
                      static_cast<std::uint32_t>(parse_uint(head[3], "grid height"))};
  if (grid.width == 0 || grid.height == 0) throw DataError("line 1: grid dimensions must be positive");
  const std::uint64_t n_edges = parse_uint(head[4], "edge count");

  std::vector<Hyperedge> edges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != 4) throw DataError(where + ": expected 4 tab-separated fields");
    Hyperedge e;
    const std::uint64_t size = parse_uint(fields[0], where + " size");
    e.weight = parse_double(fields[1], where + " support");
    e.count = parse_uint(fields[2], where + " count");
    for (auto tok : split(fields[3], ' ')) {
      e.items.push_back(static_cast<LocationId>(parse_uint(tok, where + " item")));
    }
    if (e.items.size() != size) throw DataError(where + ": size field does not match item count");
    edges.push_back(std::move(e));
  }
  if (edges.size() != n_edges) {
    throw DataError("header declares " + std::to_string(n_edges) + " edges, file has " +
                    std::to_string(edges.size()));
  }
  std::vector<LocationId> nodes(grid.cell_count());
  std::iota(nodes.begin(), nodes.end(), 0u);
  return Hypergraph(grid, std::move(nodes), std::move(edges));
}

}  // namespace covis
