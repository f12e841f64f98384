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

#include "covis/transactions.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "covis/error.hpp"
#include "covis/parallel.hpp"

namespace covis {

std::vector<Window> enumerate_windows(std::uint32_t days, std::uint32_t delta_t) {
  if (delta_t == 0) throw UsageError("window length must be >= 1");
  if (delta_t > days) {
    throw UsageError("window length " + std::to_string(delta_t) + " exceeds horizon of " +
                     std::to_string(days) + " days");
  }
  std::vector<Window> out;
  out.reserve(days - delta_t + 1);
  for (std::uint32_t t = 0; t + delta_t <= days; ++t) out.push_back({t, t + delta_t});
  return out;
}

void TransactionDataset::push_back(std::span<const LocationId> items) {
  items_.insert(items_.end(), items.begin(), items.end());
  offsets_.push_back(items_.size());
}

TransactionDataset build_transactions(const VisitLog& log, std::uint32_t delta_t, unsigned threads) {
  const auto windows = enumerate_windows(log.horizon(), delta_t);
  const std::size_t r = log.individual_count();

  // Each window is re-unioned from its daily sets.
  std::vector<TransactionDataset> per_window(windows.size());
  parallel_for(windows.size(), threads, [&](std::size_t w) {
    TransactionDataset& part = per_window[w];
    std::vector<LocationId> merged;
    for (std::size_t i = 0; i < r; ++i) {
      merged.clear();
      for (std::uint32_t d = windows[w].start; d < windows[w].end; ++d) {
        auto v = log.visits(i, d);
        merged.insert(merged.end(), v.begin(), v.end());
      }
      if (merged.empty()) continue;
      std::sort(merged.begin(), merged.end());
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      part.push_back(merged);
    }
  });

  TransactionDataset out;
  for (const auto& part : per_window) {
    for (std::size_t j = 0; j < part.size(); ++j) out.push_back(part[j]);
  }
  out.delta_t = delta_t;
  out.days = log.days();
  out.individuals = r;
  return out;
}

DatasetStats dataset_stats(const TransactionDataset& dataset) {
  DatasetStats s;
  s.transactions = dataset.size();
  std::unordered_set<LocationId> distinct;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto t = dataset[i];
    s.max_size = std::max(s.max_size, t.size());
    distinct.insert(t.begin(), t.end());
  }
  s.distinct_items = distinct.size();
  if (s.transactions > 0) {
    s.mean_size = static_cast<double>(dataset.item_occurrences()) / static_cast<double>(s.transactions);
  }
  return s;
}

void write_transactions(std::ostream& out, const TransactionDataset& dataset) {
  std::string line;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    line.clear();
    for (LocationId id : dataset[i]) {
      if (!line.empty()) line += ' ';
      line += std::to_string(id);
    }
    line += '\n';
    out << line;
  }
}

}  // namespace covis
