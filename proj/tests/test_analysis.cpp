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

#include <gtest/gtest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "covis/analysis.hpp"
#include "covis/error.hpp"
#include "covis/random.hpp"
#include "test_util.hpp"

namespace covis {
namespace {

Hypergraph hg_with_degrees(const std::vector<std::size_t>& wanted) {
  // Star-free construction: node i joins wanted[i] distinct edges of the
  // form {i, hub_j} where hubs sit after the counted nodes.
  const auto n = static_cast<LocationId>(wanted.size());
  std::size_t hubs = 0;
  for (auto d : wanted) hubs = std::max(hubs, d);
  std::vector<Hyperedge> edges;
  for (LocationId i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < wanted[i]; ++j) edges.push_back({{i, static_cast<LocationId>(n + j)}, 1, 0.1});
  }
  std::sort(edges.begin(), edges.end(), [](auto& a, auto& b) { return a.items < b.items; });
  const GridDims grid{n + static_cast<std::uint32_t>(hubs), 1};
  std::vector<LocationId> nodes(grid.cell_count());
  std::iota(nodes.begin(), nodes.end(), 0u);
  return Hypergraph(grid, nodes, edges);
}

TEST(DegreeCcdf, DirectCounting) {
  // Four nodes of degree 1,1,2,3 only (no hubs): use explicit edges.
  const Hypergraph hg({4, 1}, {0, 1, 2, 3},
                      {{{0, 2, 3}, 1, 0.1}, {{1, 3}, 1, 0.1}, {{2, 3}, 1, 0.1}});
  const auto c = degree_ccdf(hg);
  ASSERT_EQ(c.size(), 5u);
  EXPECT_EQ(c[0], (CcdfPoint{0, 1.0}));
  EXPECT_EQ(c[1], (CcdfPoint{1, 1.0}));
  EXPECT_EQ(c[2], (CcdfPoint{2, 0.5}));
  EXPECT_EQ(c[3], (CcdfPoint{3, 0.25}));
  EXPECT_EQ(c[4], (CcdfPoint{4, 0.0}));
}

TEST(DegreeCcdf, EdgelessAndUniform) {
  const Hypergraph empty = from_patterns(PatternSet{}, {3, 3});
  const auto c = degree_ccdf(empty);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].p, 1.0);
  EXPECT_EQ(c[1].p, 0.0);

  // Every node in exactly two edges.
  const Hypergraph reg({3, 1}, {0, 1, 2}, {{{0, 1}, 1, 0.1}, {{0, 2}, 1, 0.1}, {{1, 2}, 1, 0.1}});
  const auto s = degree_ccdf(reg);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[2].p, 1.0);
  EXPECT_EQ(s[3].p, 0.0);
}

TEST(DegreeCcdfProperty, MatchesBruteForceCount) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::size_t> wanted(5 + rng() % 10);
    for (auto& d : wanted) d = rng() % 6;
    const Hypergraph hg = hg_with_degrees(wanted);
    const auto c = degree_ccdf(hg);
    auto deg = hg.degrees();
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto at_least = std::count_if(deg.begin(), deg.end(), [&](auto d) { return d >= c[i].k; });
      EXPECT_DOUBLE_EQ(c[i].p, static_cast<double>(at_least) / static_cast<double>(deg.size()));
      if (i > 0) {
        EXPECT_LE(c[i].p, c[i - 1].p);
      }
    }
    EXPECT_EQ(c.front().p, 1.0);
    EXPECT_EQ(c.back().p, 0.0);
  }
}

TEST(HurwitzZeta, MatchesRiemannZetaAndPartialSums) {
  for (double s : {1.1, 1.5, 2.0, 2.5, 3.7, 8.0, 30.0}) {
    EXPECT_NEAR(hurwitz_zeta(s, 1.0), boost::math::zeta(s), 1e-10 * boost::math::zeta(s)) << s;
    // zeta(s, 3) = zeta(s) - 1 - 2^-s
    EXPECT_NEAR(hurwitz_zeta(s, 3.0), boost::math::zeta(s) - 1.0 - std::pow(2.0, -s), 1e-10) << s;
  }
}

std::vector<std::uint64_t> geometric_samples(double lambda, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const double log_q = -lambda;
  std::vector<std::uint64_t> out(n);
  for (auto& v : out) {
    double u;
    do {
      u = rng.uniform01();
    } while (u == 0.0);
    v = 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / log_q));
  }
  return out;
}

// Devroye's rejection sampler for the zeta distribution on {1, 2, ...}.
std::vector<std::uint64_t> zeta_samples(double alpha, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const double b = std::pow(2.0, alpha - 1.0);
  std::vector<std::uint64_t> out;
  while (out.size() < n) {
    const double u = 1.0 - rng.uniform01();
    const double v = rng.uniform01();
    const double x = std::floor(std::pow(u, -1.0 / (alpha - 1.0)));
    if (x > 1e12) continue;
    const double t = std::pow(1.0 + 1.0 / x, alpha - 1.0);
    if (v * x * (t - 1.0) / (b - 1.0) <= t / b) out.push_back(static_cast<std::uint64_t>(x));
  }
  return out;
}

TEST(FitDegreeDistribution, RecoversGeometric) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto fit = fit_degree_distribution(geometric_samples(0.5, 10000, seed));
    EXPECT_GE(fit.lambda, 0.45);
    EXPECT_LE(fit.lambda, 0.55);
    EXPECT_GT(fit.llr, 0.0);
    EXPECT_EQ(fit.best, FitResult::Family::kExponential);
    EXPECT_GT(fit.alpha, 1.0);
  }
}

TEST(FitDegreeDistribution, PowerLawFavoredOnZetaData) {
  const auto fit = fit_degree_distribution(zeta_samples(2.5, 10000, 4));
  EXPECT_LT(fit.llr, 0.0);
  EXPECT_EQ(fit.best, FitResult::Family::kPowerLaw);
  EXPECT_NEAR(fit.alpha, 2.5, 0.1);
}

TEST(FitDegreeDistribution, PowerLawMleIsStationary) {
  const auto samples = zeta_samples(2.2, 3000, 9);
  const auto fit = fit_degree_distribution(samples);
  double sum_log = 0;
  for (auto v : samples) sum_log += std::log(static_cast<double>(v));
  auto ll = [&](double a) { return -a * sum_log - samples.size() * std::log(boost::math::zeta(a)); };
  EXPECT_NEAR(ll(fit.alpha), fit.pl_loglik, 1e-6 * std::abs(fit.pl_loglik));
  EXPECT_GE(fit.pl_loglik, ll(fit.alpha + 1e-3));
  EXPECT_GE(fit.pl_loglik, ll(fit.alpha - 1e-3));
}

TEST(FitDegreeDistribution, RejectsDegenerateInput) {
  EXPECT_THROW(fit_degree_distribution(std::vector<std::uint64_t>(20, 3)), DataError);
  EXPECT_THROW(fit_degree_distribution(std::vector<std::uint64_t>{1, 2, 3}), DataError);
}

TEST(SizeHistogram, Basics) {
  std::ifstream in(testing::fixture("fig2.hg"));
  const auto hist = hyperedge_size_histogram(read_hypergraph(in));
  EXPECT_EQ(hist, (std::map<std::size_t, std::size_t>{{2, 3}, {3, 2}}));
  EXPECT_TRUE(hyperedge_size_histogram(from_patterns(PatternSet{}, {2, 2})).empty());
}

TEST(Chebyshev, Distances) {
  EXPECT_EQ(chebyshev({4, 4}, {4, 4}), 0u);
  EXPECT_EQ(chebyshev({0, 0}, {3, 2}), 3u);
  EXPECT_EQ(chebyshev({5, 1}, {1, 5}), 4u);
  EXPECT_EQ(chebyshev({1, 5}, {5, 1}), 4u);
}

TEST(MaxChebyshev, PerEdgeAndRestriction) {
  const GridDims g{10, 10};
  const auto id = [&](std::uint32_t x, std::uint32_t y) { return location_id({x, y}, g); };
  std::vector<LocationId> tri = {id(0, 0), id(2, 1), id(1, 3)};
  std::sort(tri.begin(), tri.end());
  std::vector<LocationId> all(g.cell_count());
  std::iota(all.begin(), all.end(), 0u);
  const Hypergraph hg(g, all, {{tri, 1, 0.1}});
  EXPECT_EQ(max_chebyshev(hg, 3), 3u);
  EXPECT_THROW(max_chebyshev(hg, 4), NoQualifyingEdges);

  // Neighbours of one cell only.
  const Hypergraph local(g, all, {{{id(4, 4), id(5, 4), id(5, 5)}, 1, 0.1}, {{id(3, 3), id(4, 3), id(4, 4)}, 1, 0.1}});
  EXPECT_EQ(max_chebyshev(local, 3), 1u);
}

TEST(MaxChebyshevProperty, SubhypergraphNeverExceedsWhole) {
  std::mt19937_64 rng(3);
  const GridDims g{8, 8};
  std::vector<LocationId> all(g.cell_count());
  std::iota(all.begin(), all.end(), 0u);
  for (int trial = 0; trial < 50; ++trial) {
    std::set<std::vector<LocationId>> sets;
    while (sets.size() < 12) {
      std::set<LocationId> s;
      const std::size_t k = 3 + rng() % 3;
      while (s.size() < k) s.insert(static_cast<LocationId>(rng() % g.cell_count()));
      sets.insert({s.begin(), s.end()});
    }
    std::vector<Hyperedge> edges;
    for (const auto& s : sets) edges.push_back({s, 1, 0.1});
    const Hypergraph hg(g, all, edges);
    // Brute force over all pairs of every edge.
    std::uint32_t brute = 0;
    for (const auto& e : edges) {
      for (auto a : e.items) {
        for (auto b : e.items) brute = std::max(brute, chebyshev(location_of(a, g), location_of(b, g)));
      }
    }
    const auto whole = max_chebyshev(hg, 3);
    EXPECT_EQ(whole, brute);
    for (std::size_t k = 3; k <= 5; ++k) {
      const Hypergraph sub = k_uniform_sub(hg, k);
      if (sub.edge_count() > 0) EXPECT_LE(max_chebyshev(sub, 3), whole);
    }
  }
}

TEST(DegreeHeatmap, Layout) {
  const GridDims g{3, 2};
  const Hypergraph hg(g, {0, 1, 2, 3, 4, 5}, {{{location_id({0, 0}, g), location_id({1, 1}, g)}, 1, 0.1}});
  const DegreeGrid grid = degree_heatmap(hg);
  EXPECT_EQ(grid.at(0, 0), 1u);
  EXPECT_EQ(grid.at(1, 1), 1u);
  EXPECT_EQ(grid.max_degree, 1u);
  std::ostringstream out;
  write_heatmap_csv(out, grid);
  EXPECT_EQ(out.str(), "1,0,0\n0,1,0\n");

  const DegreeGrid zero = degree_heatmap(from_patterns(PatternSet{}, {2, 2}));
  EXPECT_EQ(zero.max_degree, 0u);
  EXPECT_EQ(zero.cells, (std::vector<std::size_t>(4, 0)));
}

TEST(PowerLawFit, ExactOnNoiselessData) {
  std::vector<double> x, y;
  for (int i = 1; i <= 20; ++i) {
    x.push_back(i);
    y.push_back(2.0 * std::pow(i, 1.5));
  }
  const auto fit = fit_power_law_loglog(x, y);
  EXPECT_NEAR(fit.a, 2.0, 1e-9);
  EXPECT_NEAR(fit.b, 1.5, 1e-9);
  EXPECT_NEAR(fit.r2, 1.0, 1e-9);
}

TEST(PowerLawFit, ConstantAndExclusions) {
  const auto flat = fit_power_law_loglog(std::vector<double>{1, 2, 3, 4}, std::vector<double>{5, 5, 5, 5});
  EXPECT_NEAR(flat.b, 0.0, 1e-12);
  EXPECT_NEAR(flat.a, 5.0, 1e-12);

  // Zero entries are dropped; the remaining three lie on y = x^2.
  const auto fit = fit_power_law_loglog(std::vector<double>{0, 1, 2, 3, 4}, std::vector<double>{7, 1, 4, 9, 0});
  EXPECT_EQ(fit.n, 3u);
  EXPECT_NEAR(fit.b, 2.0, 1e-12);
  EXPECT_THROW(fit_power_law_loglog(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DataError);
}

TEST(PoiDegreeFit, UsesDegreeAgainstPoiCount) {
  // Degrees 1..4 on cells 0..3; POI counts chosen so degree = 0.5 * poi^0.5.
  std::vector<std::size_t> wanted = {1, 2, 3, 4};
  const Hypergraph hg = hg_with_degrees(wanted);
  PoiTable poi;
  for (LocationId i = 0; i < 4; ++i) poi[i] = static_cast<std::uint64_t>(4 * (i + 1) * (i + 1));
  poi[hg.grid().cell_count() - 1] = 0;
  const auto fit = poi_degree_fit(poi, hg);
  EXPECT_EQ(fit.n, 4u);
  EXPECT_NEAR(fit.b, 0.5, 1e-12);
  EXPECT_NEAR(fit.a, 0.5, 1e-12);
}

TEST(PoiTable, AggregatesRawCells) {
  std::istringstream in("x,y,category,count\n0,0,1,3\n9,9,2,4\n10,0,1,5\n");
  const PoiTable t = read_poi_table(in, GridSpec{20, 20, 10});
  EXPECT_EQ(t, (PoiTable{{0, 7}, {1, 5}}));
  std::istringstream bad("x,y,category,count\n25,0,1,1\n");
  EXPECT_THROW(read_poi_table(bad, GridSpec{20, 20, 10}), DataError);
}

}  // namespace
}  // namespace covis
