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
#include <ostream>
#include <vector>

#include "covis/ingest.hpp"
#include "covis/transactions.hpp"

namespace covis {

struct MiningParams {
  double min_sup = 0.005;
  std::uint32_t min_size = 2;

  // Throws UsageError unless 0 < min_sup <= 1 and min_size >= 1.
  void validate() const;
  // ceil(min_sup * M) computed without floating-point boundary drift.
  std::uint64_t absolute_threshold(std::uint64_t transactions) const;
};

struct FrequentPattern {
  std::vector<LocationId> items;  // strictly ascending
  std::uint64_t count = 0;

  bool operator==(const FrequentPattern&) const = default;
};

/// Mining output in canonical order: size ascending, then lexicographic.
/// Supports are exact as count / transactions.
struct PatternSet {
  std::vector<FrequentPattern> patterns;
  MiningParams params;
  std::uint64_t transactions = 0;

  double support(const FrequentPattern& p) const {
    return static_cast<double>(p.count) / static_cast<double>(transactions);
  }
  std::size_t size() const { return patterns.size(); }
  bool empty() const { return patterns.empty(); }
};

// Sorts into canonical order.
void canonicalize(std::vector<FrequentPattern>& patterns);

/// FP-Growth. Items are ordered by descending support with ties broken by
/// ascending id; conditional trees of the top-level items are mined on up to
/// `threads` workers. Output does not depend on `threads` or transaction order.
/// Throws DataError on an empty dataset.
PatternSet fp_growth(const TransactionDataset& dataset, const MiningParams& params,
                     unsigned threads = 1);

/// Exhaustive reference miner over the powerset of the distinct items, for
/// testing. Throws DataError if there are more than 20 distinct items.
PatternSet brute_force_mine(const TransactionDataset& dataset, const MiningParams& params);

inline constexpr std::size_t kBruteForceMaxItems = 20;

/// Keeps the patterns with no proper superset in `patterns`.
PatternSet maximal_filter(const PatternSet& patterns);

// size<TAB>support<TAB>count<TAB>ids, one line per pattern.
void write_pattern_line(std::ostream& out, const FrequentPattern& p, std::uint64_t transactions);
void write_patterns(std::ostream& out, const PatternSet& patterns);

}  // namespace covis
