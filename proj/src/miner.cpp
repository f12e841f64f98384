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

#include "covis/miner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>

#include "covis/error.hpp"
#include "covis/format.hpp"
#include "covis/parallel.hpp"

namespace covis {

void MiningParams::validate() const {
  if (!(min_sup > 0.0 && min_sup <= 1.0)) {
    throw UsageError("min_sup must be in (0, 1], got " + format_double(min_sup));
  }
  if (min_size < 1) throw UsageError("min_size must be >= 1");
}

std::uint64_t MiningParams::absolute_threshold(std::uint64_t transactions) const {
  // min_sup is a decimal fraction; 0.005 * 1000 must give 5, not 6.
  const double exact = min_sup * static_cast<double>(transactions);
  const double nearest = std::round(exact);
  std::uint64_t t;
  if (std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact)) {
    t = static_cast<std::uint64_t>(nearest);
  } else {
    t = static_cast<std::uint64_t>(std::ceil(exact));
  }
  return std::max<std::uint64_t>(t, 1);
}

void canonicalize(std::vector<FrequentPattern>& patterns) {
  std::sort(patterns.begin(), patterns.end(), [](const FrequentPattern& a, const FrequentPattern& b) {
    if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
    return a.items < b.items;
  });
}

namespace {

using Rank = std::uint32_t;
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Weighted rank sequences, each ascending, stored flat.
struct PathBuffer {
  std::vector<Rank> items;
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const Rank> operator[](std::size_t i) const {
    return std::span<const Rank>(items).subspan(offsets[i], offsets[i + 1] - offsets[i]);
  }
  void close(std::uint32_t weight) {
    offsets.push_back(items.size());
    weights.push_back(weight);
  }
};

// FP-tree in struct-of-arrays form. Node 0 is the root; nodes are created in
// depth-first order, so a tree is a single path iff parent[n] == n - 1.
struct FpTree {
  std::vector<Rank> item;
  std::vector<std::uint32_t> count;
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> next;
  std::vector<std::uint32_t> head;
  std::vector<std::uint64_t> item_count;

  explicit FpTree(std::size_t ranks) : head(ranks, kNone), item_count(ranks, 0) {
    item.push_back(kNone);
    count.push_back(0);
    parent.push_back(kNone);
    next.push_back(kNone);
  }

  std::size_t node_count() const { return item.size(); }

  bool single_path() const {
    for (std::size_t n = 1; n < parent.size(); ++n) {
      if (parent[n] != n - 1) return false;
    }
    return true;
  }
};

// Inserting paths in lexicographic order means each path shares exactly its
// longest common prefix with the previous one, so no child lookup is needed.
FpTree build_tree(const PathBuffer& paths, std::size_t ranks) {
  std::vector<std::uint32_t> order(paths.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    auto pa = paths[a];
    auto pb = paths[b];
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  });

  FpTree tree(ranks);
  std::vector<std::uint32_t> tail(ranks, kNone);
  std::vector<std::uint32_t> stack;  // node at each depth of the previous path
  std::span<const Rank> prev;
  for (std::uint32_t idx : order) {
    auto path = paths[idx];
    if (path.empty()) continue;
    const std::uint32_t w = paths.weights[idx];
    std::size_t lcp = 0;
    while (lcp < path.size() && lcp < prev.size() && path[lcp] == prev[lcp]) ++lcp;
    stack.resize(lcp);
    for (std::size_t d = 0; d < lcp; ++d) tree.count[stack[d]] += w;
    for (std::size_t d = lcp; d < path.size(); ++d) {
      const auto node = static_cast<std::uint32_t>(tree.node_count());
      const Rank r = path[d];
      tree.item.push_back(r);
      tree.count.push_back(w);
      tree.parent.push_back(d == 0 ? 0u : stack[d - 1]);
      tree.next.push_back(kNone);
      if (tail[r] == kNone) {
        tree.head[r] = node;
      } else {
        tree.next[tail[r]] = node;
      }
      tail[r] = node;
      stack.push_back(node);
    }
    for (Rank r : path) tree.item_count[r] += w;
    prev = path;
  }
  return tree;
}

class Miner {
 public:
  Miner(std::span<const LocationId> rank_to_id, std::uint64_t threshold, std::uint32_t min_size)
      : rank_to_id_(rank_to_id),
        threshold_(threshold),
        min_size_(min_size),
        cond_count_(rank_to_id.size(), 0) {}

  // Emits every frequent itemset whose least-frequent item is `r`, i.e. the
  // itemset {r} and all itemsets grown from r's conditional tree.
  void mine_item(const FpTree& tree, Rank r, std::vector<Rank>& suffix) {
    suffix.push_back(r);
    emit(suffix, tree.item_count[r]);
    PathBuffer base = conditional_base(tree, r);
    if (base.size() > 0) {
      FpTree cond = build_tree(base, rank_to_id_.size());
      mine(cond, suffix);
    }
    suffix.pop_back();
  }

  std::vector<FrequentPattern> take() { return std::move(out_); }

 private:
  void mine(const FpTree& tree, std::vector<Rank>& suffix) {
    if (tree.node_count() <= 1) return;
    if (tree.single_path()) {
      mine_single_path(tree, suffix);
      return;
    }
    for (Rank r = 0; r < tree.head.size(); ++r) {
      if (tree.head[r] != kNone) mine_item(tree, r, suffix);
    }
  }

  // Every combination of path nodes is frequent; its count is that of the
  // deepest chosen node, since counts do not increase going down.
  void mine_single_path(const FpTree& tree, std::vector<Rank>& suffix) {
    const std::size_t depth = tree.node_count() - 1;
    for (std::size_t deepest = 1; deepest <= depth; ++deepest) {
      suffix.push_back(tree.item[deepest]);
      combine(tree, 1, deepest, tree.count[deepest], suffix);
      suffix.pop_back();
    }
  }

  void combine(const FpTree& tree, std::size_t from, std::size_t limit, std::uint64_t count,
               std::vector<Rank>& suffix) {
    emit(suffix, count);
    for (std::size_t n = from; n < limit; ++n) {
      suffix.push_back(tree.item[n]);
      combine(tree, n + 1, limit, count, suffix);
      suffix.pop_back();
    }
  }

  PathBuffer conditional_base(const FpTree& tree, Rank r) {
    PathBuffer raw;
    for (std::uint32_t n = tree.head[r]; n != kNone; n = tree.next[n]) {
      const std::uint32_t w = tree.count[n];
      const std::size_t begin = raw.items.size();
      for (std::uint32_t p = tree.parent[n]; p != 0; p = tree.parent[p]) {
        raw.items.push_back(tree.item[p]);
        cond_count_[tree.item[p]] += w;
      }
      std::reverse(raw.items.begin() + static_cast<std::ptrdiff_t>(begin), raw.items.end());
      raw.close(w);
    }

    PathBuffer filtered;
    filtered.items.reserve(raw.items.size());
    bool any = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      for (Rank item : raw[i]) {
        if (cond_count_[item] >= threshold_) filtered.items.push_back(item);
      }
      if (filtered.items.size() > filtered.offsets.back()) {
        filtered.close(raw.weights[i]);
        any = true;
      }
    }
    for (Rank item : raw.items) cond_count_[item] = 0;
    if (!any) return {};
    return filtered;
  }

  void emit(std::span<const Rank> ranks, std::uint64_t count) {
    if (ranks.size() < min_size_) return;
    FrequentPattern p;
    p.items.reserve(ranks.size());
    for (Rank r : ranks) p.items.push_back(rank_to_id_[r]);
    std::sort(p.items.begin(), p.items.end());
    p.count = count;
    out_.push_back(std::move(p));
  }

  std::span<const LocationId> rank_to_id_;
  std::uint64_t threshold_;
  std::uint32_t min_size_;
  std::vector<std::uint64_t> cond_count_;
  std::vector<FrequentPattern> out_;
};

}  // namespace

PatternSet fp_growth(const TransactionDataset& dataset, const MiningParams& params, unsigned threads) {
  params.validate();
  if (dataset.empty()) throw DataError("cannot mine an empty transaction dataset");
  if (dataset.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("too many transactions for 32-bit node counts");
  }
  const std::uint64_t threshold = params.absolute_threshold(dataset.size());

  std::unordered_map<LocationId, std::uint64_t> freq;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (LocationId id : dataset[i]) ++freq[id];
  }
  std::vector<std::pair<LocationId, std::uint64_t>> frequent;
  for (const auto& [id, c] : freq) {
    if (c >= threshold) frequent.emplace_back(id, c);
  }
  std::sort(frequent.begin(), frequent.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<LocationId> rank_to_id;
  std::unordered_map<LocationId, Rank> id_to_rank;
  for (const auto& [id, c] : frequent) {
    id_to_rank.emplace(id, static_cast<Rank>(rank_to_id.size()));
    rank_to_id.push_back(id);
  }

  PathBuffer paths;
  paths.items.reserve(dataset.item_occurrences());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const std::size_t begin = paths.items.size();
    for (LocationId id : dataset[i]) {
      auto it = id_to_rank.find(id);
      if (it != id_to_rank.end()) paths.items.push_back(it->second);
    }
    if (paths.items.size() == begin) continue;
    std::sort(paths.items.begin() + static_cast<std::ptrdiff_t>(begin), paths.items.end());
    paths.close(1);
  }
  const FpTree tree = build_tree(paths, rank_to_id.size());
  paths = PathBuffer{};

  std::vector<std::vector<FrequentPattern>> per_item(rank_to_id.size());
  parallel_for(rank_to_id.size(), threads, [&](std::size_t r) {
    Miner miner(rank_to_id, threshold, params.min_size);
    std::vector<Rank> suffix;
    miner.mine_item(tree, static_cast<Rank>(r), suffix);
    per_item[r] = miner.take();
  });

  PatternSet out;
  out.params = params;
  out.transactions = dataset.size();
  std::size_t total = 0;
  for (const auto& v : per_item) total += v.size();
  out.patterns.reserve(total);
  for (auto& v : per_item) {
    std::move(v.begin(), v.end(), std::back_inserter(out.patterns));
  }
  canonicalize(out.patterns);
  return out;
}

PatternSet brute_force_mine(const TransactionDataset& dataset, const MiningParams& params) {
  params.validate();
  if (dataset.empty()) throw DataError("cannot mine an empty transaction dataset");
  std::vector<LocationId> items;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    items.insert(items.end(), dataset[i].begin(), dataset[i].end());
  }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  if (items.size() > kBruteForceMaxItems) {
    throw DataError("brute-force mining limited to " + std::to_string(kBruteForceMaxItems) +
                    " distinct items, got " + std::to_string(items.size()));
  }

  std::vector<std::uint32_t> masks;
  masks.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    std::uint32_t m = 0;
    for (LocationId id : dataset[i]) {
      m |= 1u << (std::lower_bound(items.begin(), items.end(), id) - items.begin());
    }
    masks.push_back(m);
  }

  const std::uint64_t threshold = params.absolute_threshold(dataset.size());
  PatternSet out;
  out.params = params;
  out.transactions = dataset.size();
  const std::uint32_t universe = items.empty() ? 0u : (1u << items.size());
  for (std::uint32_t cand = 1; cand < universe; ++cand) {
    if (static_cast<std::uint32_t>(std::popcount(cand)) < params.min_size) continue;
    std::uint64_t count = 0;
    for (std::uint32_t m : masks) count += (m & cand) == cand;
    if (count < threshold) continue;
    FrequentPattern p;
    for (std::size_t b = 0; b < items.size(); ++b) {
      if (cand & (1u << b)) p.items.push_back(items[b]);
    }
    p.count = count;
    out.patterns.push_back(std::move(p));
  }
  canonicalize(out.patterns);
  return out;
}

PatternSet maximal_filter(const PatternSet& in) {
  // Inverted index: item -> patterns containing it (ascending index, so
  // ascending size in canonical order).
  std::unordered_map<LocationId, std::vector<std::uint32_t>> postings;
  for (std::uint32_t i = 0; i < in.patterns.size(); ++i) {
    for (LocationId id : in.patterns[i].items) postings[id].push_back(i);
  }
  PatternSet out;
  out.params = in.params;
  out.transactions = in.transactions;
  for (std::uint32_t i = 0; i < in.patterns.size(); ++i) {
    const auto& items = in.patterns[i].items;
    bool maximal = true;
    if (!items.empty()) {
      // Candidates: patterns containing the rarest item, strictly larger.
      const std::vector<std::uint32_t>* shortest = &postings[items[0]];
      for (LocationId id : items) {
        if (postings[id].size() < shortest->size()) shortest = &postings[id];
      }
      for (std::uint32_t j : *shortest) {
        const auto& other = in.patterns[j].items;
        if (other.size() <= items.size()) continue;
        if (std::includes(other.begin(), other.end(), items.begin(), items.end())) {
          maximal = false;
          break;
        }
      }
    }
    if (maximal) out.patterns.push_back(in.patterns[i]);
  }
  return out;
}

void write_pattern_line(std::ostream& out, const FrequentPattern& p, std::uint64_t transactions) {
  std::string line = std::to_string(p.items.size());
  line += '\t';
  line += format_double(static_cast<double>(p.count) / static_cast<double>(transactions));
  line += '\t';
  line += std::to_string(p.count);
  line += '\t';
  for (std::size_t i = 0; i < p.items.size(); ++i) {
    if (i) line += ' ';
    line += std::to_string(p.items[i]);
  }
  line += '\n';
  out << line;
}

void write_patterns(std::ostream& out, const PatternSet& patterns) {
  for (const auto& p : patterns.patterns) write_pattern_line(out, p, patterns.transactions);
}

}  // namespace covis
