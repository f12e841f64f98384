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

#include "covis/hypergraph.hpp"
#include "covis/ingest.hpp"
#include "covis/miner.hpp"
#include "covis/transactions.hpp"

namespace covis {

struct HypergraphBuild {
  PatternSet patterns;
  Hypergraph hypergraph;
};

/// Mines \p dataset and turns every frequent itemset into a weighted
/// hyperedge. With \p maximal_only, non-maximal itemsets are dropped first.
HypergraphBuild build_hypergraph(const TransactionDataset& dataset, GridDims grid,
                                 const MiningParams& params, bool maximal_only = false,
                                 unsigned threads = 1);

// Windowing + mining + construction in one call.
HypergraphBuild build_hypergraph(const VisitLog& log, std::uint32_t delta_t,
                                 const MiningParams& params, bool maximal_only = false,
                                 unsigned threads = 1);

}  // namespace covis
