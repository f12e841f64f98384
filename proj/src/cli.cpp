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

#include "covis/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "covis/analysis.hpp"
#include "covis/error.hpp"
#include "covis/format.hpp"
#include "covis/hypergraph.hpp"
#include "covis/ingest.hpp"
#include "covis/parallel.hpp"
#include "covis/phase.hpp"
#include "covis/pipeline.hpp"
#include "covis/synth.hpp"
#include "covis/transactions.hpp"

namespace fs = std::filesystem;

namespace covis {

namespace {

// Flag values as given on the command line; parsed after CLI11 is done so
// errors map onto the usage exit code.
struct Flags {
  std::vector<std::string> inputs;
  std::string grid = "200x200";
  std::uint32_t scale = 10;
  std::vector<std::uint32_t> delta_ts{1, 3, 7};
  std::vector<std::string> min_sups{"0.005", "0.01", "0.015"};
  std::uint32_t min_size = 2;
  std::string days;
  std::vector<std::string> phases;
  bool maximal = false;
  std::optional<std::size_t> k_uniform;
  std::string poi;
  std::string out;
  unsigned threads = default_threads();
  std::optional<std::uint64_t> seed;
  std::string spec;
  std::string format = "bipartite";
  std::size_t min_edge_size = kHigherOrderMinSize;
  bool dump_transactions = false;
};

std::pair<std::uint32_t, std::uint32_t> parse_pair(const std::string& s, const std::string& sep,
                                                   const std::string& flag) {
  const auto pos = s.find(sep);
  if (pos == std::string::npos) throw UsageError(flag + ": expected A" + sep + "B, got '" + s + "'");
  try {
    return {static_cast<std::uint32_t>(parse_uint(s.substr(0, pos), flag)),
            static_cast<std::uint32_t>(parse_uint(s.substr(pos + sep.size()), flag))};
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

GridSpec grid_of(const Flags& f) {
  const auto [w, h] = parse_pair(f.grid, "x", "--grid");
  GridSpec g{w, h, f.scale};
  g.validate();
  return g;
}

DayRange day_range(const std::string& s, const std::string& flag) {
  const auto [lo, hi] = parse_pair(s, "..", flag);
  if (lo >= hi) throw UsageError(flag + ": empty day range '" + s + "'");
  return {lo, hi};
}

PhaseSpec parse_phase(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--phase: expected LABEL=LO..HI, got '" + s + "'");
  return {s.substr(0, eq), day_range(s.substr(eq + 1), "--phase")};
}

std::vector<double> min_sups_of(const Flags& f) {
  std::vector<double> out;
  for (const auto& s : f.min_sups) {
    double v;
    try {
      v = parse_double(s, "--min-sup");
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
    MiningParams{v, f.min_size}.validate();
    out.push_back(v);
  }
  return out;
}

void check_delta_ts(const Flags& f) {
  if (f.delta_ts.empty()) throw UsageError("--delta-t: at least one value required");
  for (auto dt : f.delta_ts) {
    if (dt == 0) throw UsageError("--delta-t: values must be >= 1");
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

void make_dir(const std::string& dir) {
  if (dir.empty()) throw UsageError("--out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + dir + "': " + ec.message());
}

std::string hg_file_name(std::uint32_t dt, double min_sup) {
  return "hg_dt" + std::to_string(dt) + "_sup" + format_double(min_sup) + ".hg";
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int cmd_build(const Flags& f, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (f.inputs.size() != 1) throw UsageError("build takes exactly one --input");
  const GridSpec grid = grid_of(f);
  check_delta_ts(f);
  const auto sups = min_sups_of(f);
  std::optional<DayRange> days;
  if (!f.days.empty()) days = day_range(f.days, "--days");
  make_dir(f.out);

  auto in = open_in(f.inputs[0]);
  const VisitLog log = read_visit_log(in, grid, days);
  for (auto dt : f.delta_ts) {
    if (dt > log.horizon()) {
      throw UsageError("--delta-t " + std::to_string(dt) + " exceeds the " + std::to_string(log.horizon()) +
                       "-day range");
    }
  }

  nlohmann::json config = {
      {"input", fs::path(f.inputs[0]).filename().string()},
      {"grid", {{"width", grid.raw_width}, {"height", grid.raw_height}, {"scale", grid.scale}}},
      {"days", {log.days().lo, log.days().hi}},
      {"delta_t", f.delta_ts},
      {"min_sup", sups},
      {"min_size", f.min_size},
      {"maximal_only", f.maximal},
  };
  nlohmann::json transactions = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::array();
  for (auto dt : f.delta_ts) {
    const TransactionDataset dataset = build_transactions(log, dt, f.threads);
    transactions[std::to_string(dt)] = dataset.size();
    if (f.dump_transactions) {
      auto tx = open_out(fs::path(f.out) / ("transactions_dt" + std::to_string(dt) + ".txt"));
      write_transactions(tx, dataset);
    }
    for (double sup : sups) {
      const auto build = build_hypergraph(dataset, log.grid(), MiningParams{sup, f.min_size}, f.maximal, f.threads);
      const std::string name = hg_file_name(dt, sup);
      auto hg_out = open_out(fs::path(f.out) / name);
      write_hypergraph(hg_out, build.hypergraph);
      outputs.push_back({{"file", name},
                         {"delta_t", dt},
                         {"min_sup", sup},
                         {"threshold", build.patterns.params.absolute_threshold(dataset.size())},
                         {"edges", build.hypergraph.edge_count()},
                         {"rank", rank(build.hypergraph)}});
      out << name << ": " << build.hypergraph.edge_count() << " hyperedges from " << dataset.size()
          << " transactions\n";
    }
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::json manifest = {
      {"tool", "covis"},
      {"version", kVersion},
      {"command", "build"},
      {"config", config},
      {"config_hash", hex64(fnv1a64(config.dump()))},
      {"threshold_rule", "count >= ceil(min_sup * M)"},
      {"individuals", log.individual_count()},
      {"transactions", transactions},
      {"outputs", outputs},
      {"threads", f.threads},
      {"wall_time_s", wall},
  };
  write_json(fs::path(f.out) / "manifest.json", manifest);
  return kExitOk;
}

int cmd_analyze(const Flags& f, std::ostream& out) {
  if (f.inputs.empty()) throw UsageError("analyze needs at least one --input");
  make_dir(f.out);
  std::optional<PoiTable> poi_table;
  for (const auto& path : f.inputs) {
    auto in = open_in(path);
    Hypergraph hg = read_hypergraph(in);
    if (f.k_uniform) hg = k_uniform_sub(hg, *f.k_uniform);

    if (!f.poi.empty() && !poi_table) {
      GridSpec raw{hg.grid().width * f.scale, hg.grid().height * f.scale, f.scale};
      if (f.grid != Flags{}.grid) raw = grid_of(f);
      if (raw.aggregated() != hg.grid()) throw UsageError("--grid/--scale do not match the hypergraph grid");
      auto poi_in = open_in(f.poi);
      poi_table = read_poi_table(poi_in, raw);
    }

    const fs::path dir = fs::path(f.out) / fs::path(path).stem();
    make_dir(dir.string());
    {
      auto o = open_out(dir / "ccdf.csv");
      write_ccdf_csv(o, degree_ccdf(hg));
    }
    {
      auto o = open_out(dir / "sizes.csv");
      write_size_csv(o, hyperedge_size_histogram(hg));
    }
    {
      auto o = open_out(dir / "heatmap.csv");
      write_heatmap_csv(o, degree_heatmap(hg));
    }

    nlohmann::json cheb = {{"min_edge_size", f.min_edge_size}};
    try {
      cheb["d_inf"] = max_chebyshev(hg, f.min_edge_size);
    } catch (const NoQualifyingEdges&) {
      cheb["d_inf"] = nullptr;
    }
    nlohmann::json per_size = nlohmann::json::object();
    for (const auto& [size, count] : hyperedge_size_histogram(hg)) {
      if (size >= 2) per_size[std::to_string(size)] = max_chebyshev(k_uniform_sub(hg, size), size);
    }
    cheb["per_edge_size"] = per_size;
    if (f.k_uniform) cheb["k_uniform"] = *f.k_uniform;
    write_json(dir / "chebyshev.json", cheb);

    nlohmann::json fits;
    try {
      fits = to_json(fit_degree_distribution(positive_degrees(hg)));
    } catch (const DataError& e) {
      fits = {{"error", e.what()}};
    }
    write_json(dir / "fits.json", fits);

    if (poi_table) {
      nlohmann::json pf;
      try {
        pf = to_json(poi_degree_fit(*poi_table, hg));
      } catch (const DataError& e) {
        pf = {{"error", e.what()}};
      }
      write_json(dir / "poi_fit.json", pf);
    }
    out << path << ": " << hg.edge_count() << " hyperedges analyzed -> " << dir.string() << '\n';
  }
  return kExitOk;
}

int cmd_compare(const Flags& f, std::ostream& out) {
  if (f.inputs.size() != 1) throw UsageError("compare takes exactly one --input");
  if (f.phases.size() != 2) throw UsageError("compare needs exactly two --phase LABEL=LO..HI");
  const GridSpec grid = grid_of(f);
  check_delta_ts(f);
  const PhaseSpec a = parse_phase(f.phases[0]);
  const PhaseSpec b = parse_phase(f.phases[1]);
  if (a.days.overlaps(b.days)) throw UsageError("phases '" + a.label + "' and '" + b.label + "' overlap");
  const std::uint32_t max_dt = *std::max_element(f.delta_ts.begin(), f.delta_ts.end());
  for (const auto& p : {a, b}) {
    if (p.days.length() < max_dt) {
      throw UsageError("phase '" + p.label + "' is shorter than --delta-t " + std::to_string(max_dt));
    }
  }
  CompareOptions opts;
  opts.delta_ts = f.delta_ts;
  opts.min_sups = min_sups_of(f);
  opts.min_size = f.min_size;
  opts.min_edge_size = f.min_edge_size;
  opts.maximal_only = f.maximal;
  opts.threads = f.threads;
  make_dir(f.out);

  const DayRange span{std::min(a.days.lo, b.days.lo), std::max(a.days.hi, b.days.hi)};
  auto in = open_in(f.inputs[0]);
  const VisitLog log = read_visit_log(in, grid, span);
  const ComparisonReport report = compare_phases(log, a, b, opts);
  write_json(fs::path(f.out) / "comparison.json", to_json(report));
  out << "comparison of '" << a.label << "' and '" << b.label << "': " << report.cells.size() << " cells\n";
  return kExitOk;
}

int cmd_synth(const Flags& f, std::ostream& out) {
  if (f.spec.empty()) throw UsageError("synth needs --spec FILE");
  auto in = open_in(f.spec);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("spec '" + f.spec + "': " + e.what());
  }
  SynthSpec spec = parse_synth_spec(doc);
  if (f.seed) spec.seed = *f.seed;
  make_dir(f.out);

  const SynthOutput gen = generate(spec);
  const auto records = synth_records(spec, gen.log);
  {
    auto o = open_out(fs::path(f.out) / "trajectories.csv");
    write_records(o, records);
  }
  write_json(fs::path(f.out) / "manifest.json", synth_manifest(spec, gen));
  out << "wrote " << records.size() << " records for " << gen.log.individual_count() << " individuals\n";
  return kExitOk;
}

int cmd_export(const Flags& f, std::ostream& out) {
  if (f.inputs.size() != 1) throw UsageError("export takes exactly one --input");
  if (f.out.empty()) throw UsageError("--out FILE is required");
  auto in = open_in(f.inputs[0]);
  Hypergraph hg = read_hypergraph(in);
  if (f.k_uniform) hg = k_uniform_sub(hg, *f.k_uniform);
  auto o = open_out(f.out);
  if (f.format == "bipartite") {
    o << "node,edge\n";
    for (const auto& e : bipartite_export(hg)) o << e.node << ',' << e.edge << '\n';
  } else if (f.format == "incidence") {
    const IncidenceMatrix m = incidence_matrix(hg);
    o << "row,node,edge\n";
    for (std::size_t i = 0; i < m.rows; ++i) {
      for (std::size_t k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k) {
        o << i << ',' << hg.nodes()[i] << ',' << m.col_indices[k] << '\n';
      }
    }
  } else if (f.format == "codegree") {
    o << "u,v,weight\n";
    for (const auto& e : co_degree_graph(hg, f.min_edge_size).edges) o << e.u << ',' << e.v << ',' << e.weight << '\n';
  } else {
    throw UsageError("--format must be bipartite, incidence or codegree");
  }
  out << "exported " << f.format << " view of " << f.inputs[0] << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Co-visitation hypergraphs from mobility trajectories", "covis"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Flags f;

  auto add_threads = [&](CLI::App* c) { c->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber); };
  auto add_grid = [&](CLI::App* c) {
    c->add_option("--grid", f.grid, "Raw grid dimensions WxH")->capture_default_str();
    c->add_option("--scale", f.scale, "Spatial aggregation factor")->capture_default_str();
  };
  auto add_mining = [&](CLI::App* c) {
    c->add_option("--delta-t", f.delta_ts, "Window lengths in days")->delimiter(',')->capture_default_str();
    c->add_option("--min-sup", f.min_sups, "Minimum support fractions")->delimiter(',')->capture_default_str();
    c->add_option("--min-size", f.min_size, "Minimum itemset size")->capture_default_str();
    c->add_flag("--maximal", f.maximal, "Keep only maximal frequent itemsets");
  };

  auto* build = app.add_subcommand("build", "Build one hypergraph per (window, min_sup)");
  build->add_option("--input", f.inputs, "Trajectory CSV (uid,d,t,x,y)")->required();
  add_grid(build);
  add_mining(build);
  build->add_option("--days", f.days, "Day range LO..HI (exclusive HI)");
  build->add_flag("--transactions", f.dump_transactions, "Also dump transactions per window length");
  build->add_option("--out", f.out, "Output directory")->required();
  add_threads(build);

  auto* analyze = app.add_subcommand("analyze", "Degree, size, span and fit reports for hypergraph files");
  analyze->add_option("--input", f.inputs, "Hypergraph file(s)")->required();
  analyze->add_option("--k-uniform", f.k_uniform, "Restrict to edges of exactly this size");
  analyze->add_option("--poi", f.poi, "POI CSV (x,y,category,count) on the raw grid");
  add_grid(analyze);
  analyze->add_option("--min-edge-size", f.min_edge_size, "Smallest edge counted for D-infinity")->capture_default_str();
  analyze->add_option("--out", f.out, "Output directory")->required();

  auto* compare = app.add_subcommand("compare", "Compare hypergraphs of two day ranges");
  compare->add_option("--input", f.inputs, "Trajectory CSV")->required();
  add_grid(compare);
  add_mining(compare);
  compare->add_option("--phase", f.phases, "LABEL=LO..HI, given twice")->required();
  compare->add_option("--min-edge-size", f.min_edge_size, "Smallest edge in co-degree graphs")->capture_default_str();
  compare->add_option("--out", f.out, "Output directory")->required();
  add_threads(compare);

  auto* synth = app.add_subcommand("synth", "Generate synthetic trajectories with planted groups");
  synth->add_option("--spec", f.spec, "JSON generator spec")->required();
  synth->add_option("--seed", f.seed, "Override the spec seed");
  synth->add_option("--out", f.out, "Output directory")->required();

  auto* exp = app.add_subcommand("export", "Export a hypergraph as bipartite, incidence or co-degree edges");
  exp->add_option("--input", f.inputs, "Hypergraph file")->required();
  exp->add_option("--format", f.format, "bipartite | incidence | codegree")->capture_default_str();
  exp->add_option("--k-uniform", f.k_uniform, "Restrict to edges of exactly this size");
  exp->add_option("--min-edge-size", f.min_edge_size, "Co-degree edge size threshold")->capture_default_str();
  exp->add_option("--out", f.out, "Output file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "covis: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*build) return cmd_build(f, out);
    if (*analyze) return cmd_analyze(f, out);
    if (*compare) return cmd_compare(f, out);
    if (*synth) return cmd_synth(f, out);
    if (*exp) return cmd_export(f, out);
  } catch (const UsageError& e) {
    err << "covis: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "covis: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "covis: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace covis
