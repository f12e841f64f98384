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

#include "covis/pipeline.hpp"

namespace covis {

HypergraphBuild build_hypergraph(const TransactionDataset& dataset, GridDims grid,
                                 const MiningParams& params, bool maximal_only, unsigned threads) {
  HypergraphBuild out;
  out.patterns = fp_growth(dataset, params, threads);
  if (maximal_only) out.patterns = maximal_filter(out.patterns);
  out.hypergraph = from_patterns(out.patterns, grid);
  return out;
}

HypergraphBuild build_hypergraph(const VisitLog& log, std::uint32_t delta_t,
                                 const MiningParams& params, bool maximal_only, unsigned threads) {
  const TransactionDataset dataset = build_transactions(log, delta_t, threads);
  return build_hypergraph(dataset, log.grid(), params, maximal_only, threads);
}

}  // namespace covis
