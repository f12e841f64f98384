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

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "covis/ingest.hpp"

namespace covis {

// A window [start, start + length) in days relative to the log start.
struct Window {
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  bool operator==(const Window&) const = default;
};

/// All D - delta_t + 1 stride-1 windows. Throws UsageError unless
/// 1 <= delta_t <= days.
std::vector<Window> enumerate_windows(std::uint32_t days, std::uint32_t delta_t);

/// The bag of transactions, one per (window, individual) with a non-empty
/// union. Items of each transaction are strictly ascending. Stored flat.
class TransactionDataset {
 public:
  TransactionDataset() = default;

  std::size_t size() const { return offsets_.size() - 1; }
  bool empty() const { return size() == 0; }
  std::span<const LocationId> operator[](std::size_t i) const {
    return std::span<const LocationId>(items_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }

  // Appends a transaction; `items` must be strictly ascending and non-empty.
  void push_back(std::span<const LocationId> items);

  std::size_t item_occurrences() const { return items_.size(); }

  std::uint32_t delta_t = 0;
  DayRange days;
  std::size_t individuals = 0;

  bool operator==(const TransactionDataset&) const = default;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<LocationId> items_;
};

/// Ordered by window start, then by uid. `threads` only affects speed.
TransactionDataset build_transactions(const VisitLog& log, std::uint32_t delta_t,
                                      unsigned threads = 1);

struct DatasetStats {
  std::size_t transactions = 0;
  double mean_size = 0.0;
  std::size_t max_size = 0;
  std::size_t distinct_items = 0;
};

DatasetStats dataset_stats(const TransactionDataset& dataset);

// One transaction per line, space-separated ascending ids.
void write_transactions(std::ostream& out, const TransactionDataset& dataset);

}  // namespace covis
