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

#include "covis/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "covis/error.hpp"
#include "covis/format.hpp"

namespace covis {

std::vector<CcdfPoint> degree_ccdf(const Hypergraph& hg) {
  auto deg = hg.degrees();
  if (deg.empty()) throw DataError("CCDF of a hypergraph without nodes");
  const std::size_t max_deg = *std::max_element(deg.begin(), deg.end());
  std::vector<std::size_t> hist(max_deg + 1, 0);
  for (std::size_t d : deg) ++hist[d];
  std::vector<CcdfPoint> out(max_deg + 2);
  std::size_t at_least = 0;
  for (std::size_t k = max_deg + 2; k-- > 0;) {
    if (k <= max_deg) at_least += hist[k];
    out[k] = {k, static_cast<double>(at_least) / static_cast<double>(deg.size())};
  }
  return out;
}

std::vector<std::uint64_t> positive_degrees(const Hypergraph& hg) {
  std::vector<std::uint64_t> out;
  for (std::size_t d : hg.degrees()) {
    if (d > 0) out.push_back(d);
  }
  return out;
}

double hurwitz_zeta(double s, double q) {
  // Euler-Maclaurin summation with the tail starting far enough out that
  // the Bernoulli correction terms shrink geometrically.
  static constexpr std::array<double, 7> kB2j = {1.0 / 6,  -1.0 / 30, 1.0 / 42,     -1.0 / 30,
                                                 5.0 / 66, -691.0 / 2730, 7.0 / 6};
  const int n = 10 + static_cast<int>(std::ceil(s));
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += std::pow(q + k, -s);
  const double a = q + n;
  sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  double poch = s;                       // s (s+1) ... (s + 2j - 2)
  double fact = 2.0;                     // (2j)!
  double power = std::pow(a, -s - 1.0);  // a^{-s-2j+1}
  for (std::size_t j = 1; j <= kB2j.size(); ++j) {
    sum += kB2j[j - 1] / fact * poch * power;
    const double m = static_cast<double>(2 * j);
    poch *= (s + m - 1.0) * (s + m);
    fact *= (m + 1.0) * (m + 2.0);
    power /= a * a;
  }
  return sum;
}

FitResult fit_degree_distribution(std::span<const std::uint64_t> values, std::uint64_t xmin) {
  if (xmin < 1) throw UsageError("xmin must be >= 1");
  std::vector<std::uint64_t> tail;
  for (auto v : values) {
    if (v >= xmin) tail.push_back(v);
  }
  if (tail.size() < kMinFitSamples) {
    throw DataError("degree fit needs at least " + std::to_string(kMinFitSamples) + " values >= xmin, got " +
                    std::to_string(tail.size()));
  }
  if (std::all_of(tail.begin(), tail.end(), [&](auto v) { return v == tail.front(); })) {
    throw DataError("degree fit is degenerate: all values equal");
  }

  const double n = static_cast<double>(tail.size());
  double sum_excess = 0.0;
  double sum_log = 0.0;
  for (auto v : tail) {
    sum_excess += static_cast<double>(v - xmin);
    sum_log += std::log(static_cast<double>(v));
  }

  FitResult fit;
  fit.xmin = xmin;
  fit.n = tail.size();

  // Geometric on the excess k - xmin: q = mean / (1 + mean).
  const double mean_excess = sum_excess / n;
  const double q = mean_excess / (1.0 + mean_excess);
  fit.lambda = -std::log(q);
  fit.exp_loglik = n * std::log1p(-q) + sum_excess * std::log(q);

  const double x0 = static_cast<double>(xmin);
  auto neg_loglik = [&](double alpha) { return alpha * sum_log + n * std::log(hurwitz_zeta(alpha, x0)); };
  const auto [alpha, nll] =
      boost::math::tools::brent_find_minima(neg_loglik, 1.0 + 1e-6, 50.0, std::numeric_limits<double>::digits / 2);
  fit.alpha = alpha;
  fit.pl_loglik = -nll;

  fit.llr = fit.exp_loglik - fit.pl_loglik;
  fit.best = fit.llr >= 0 ? FitResult::Family::kExponential : FitResult::Family::kPowerLaw;
  return fit;
}

std::map<std::size_t, std::size_t> hyperedge_size_histogram(const Hypergraph& hg) {
  std::map<std::size_t, std::size_t> out;
  for (const auto& e : hg.edges()) ++out[e.size()];
  return out;
}

std::uint32_t edge_chebyshev(const Hyperedge& e, GridDims grid) {
  std::uint32_t best = 0;
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    const Location a = location_of(e.items[i], grid);
    for (std::size_t j = i + 1; j < e.items.size(); ++j) {
      best = std::max(best, chebyshev(a, location_of(e.items[j], grid)));
    }
  }
  return best;
}

std::uint32_t max_chebyshev(const Hypergraph& hg, std::size_t min_edge_size) {
  bool any = false;
  std::uint32_t best = 0;
  for (const auto& e : hg.edges()) {
    if (e.size() < min_edge_size) continue;
    any = true;
    best = std::max(best, edge_chebyshev(e, hg.grid()));
  }
  if (!any) {
    throw NoQualifyingEdges("no hyperedges of size >= " + std::to_string(min_edge_size));
  }
  return best;
}

DegreeGrid degree_heatmap(const Hypergraph& hg) {
  DegreeGrid g;
  g.dims = hg.grid();
  g.cells.assign(g.dims.cell_count(), 0);
  auto nodes = hg.nodes();
  auto deg = hg.degrees();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    g.cells[nodes[i]] = deg[i];
    g.max_degree = std::max(g.max_degree, deg[i]);
  }
  return g;
}

PoiTable read_poi_table(std::istream& in, const GridSpec& grid) {
  grid.validate();
  const GridDims dims = grid.aggregated();
  std::string line;
  if (!std::getline(in, line)) throw DataError("POI file: missing header `x,y,category,count`");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,category,count") throw DataError("POI file line 1: expected header `x,y,category,count`");
  PoiTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "POI file line " + std::to_string(line_no);
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    f.push_back(rest);
    if (f.size() != 4) throw DataError(where + ": expected 4 fields");
    const auto x = parse_uint(f[0], where + " x");
    const auto y = parse_uint(f[1], where + " y");
    const auto count = parse_uint(f[3], where + " count");
    if (x >= grid.raw_width) throw DataError(where + ": field x out of range");
    if (y >= grid.raw_height) throw DataError(where + ": field y out of range");
    const LocationId id = location_id(
        aggregate_cell(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y), grid.scale), dims);
    table[id] += count;
  }
  return table;
}

PowerLawFit fit_power_law_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("x and y lengths differ");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 3) {
    throw DataError("power-law fit needs at least 3 positive pairs, got " + std::to_string(lx.size()));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DataError("power-law fit is degenerate: all x values equal");
  PowerLawFit fit;
  fit.n = lx.size();
  fit.b = sxy / sxx;
  fit.a = std::exp(my - fit.b * mx);
  double ss_res = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (my + fit.b * (lx[i] - mx));
    ss_res += r * r;
  }
  // A constant y is fitted exactly by the horizontal line.
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

PowerLawFit poi_degree_fit(const PoiTable& poi, const Hypergraph& hg) {
  std::vector<double> x, y;
  for (const auto& [id, count] : poi) {
    if (!hg.has_node(id)) continue;
    x.push_back(static_cast<double>(count));
    y.push_back(static_cast<double>(hg.degree(id)));
  }
  return fit_power_law_loglog(x, y);
}

void write_ccdf_csv(std::ostream& out, std::span<const CcdfPoint> ccdf) {
  out << "k,p\n";
  for (const auto& pt : ccdf) out << pt.k << ',' << format_double(pt.p) << '\n';
}

void write_size_csv(std::ostream& out, const std::map<std::size_t, std::size_t>& sizes) {
  out << "size,count\n";
  for (const auto& [size, count] : sizes) out << size << ',' << count << '\n';
}

void write_heatmap_csv(std::ostream& out, const DegreeGrid& grid) {
  for (std::uint32_t y = 0; y < grid.dims.height; ++y) {
    for (std::uint32_t x = 0; x < grid.dims.width; ++x) {
      if (x) out << ',';
      out << grid.at(x, y);
    }
    out << '\n';
  }
}

nlohmann::json to_json(const FitResult& fit) {
  return {
      {"best", fit.best == FitResult::Family::kExponential ? "exponential" : "power_law"},
      {"n", fit.n},
      {"xmin", fit.xmin},
      {"exponential", {{"lambda", fit.lambda}, {"loglik", fit.exp_loglik}}},
      {"power_law", {{"alpha", fit.alpha}, {"loglik", fit.pl_loglik}}},
      {"llr", fit.llr},
  };
}

nlohmann::json to_json(const PowerLawFit& fit) {
  return {{"model", "y = a * x^b"}, {"x", "poi_count"}, {"y", "degree"},
          {"a", fit.a},             {"b", fit.b},       {"r2", fit.r2},
          {"n", fit.n}};
}

}  // namespace covis
