#pragma once

// Pipeline commands behind the faircd CLI. Every output is a pure function
// of (inputs, config, seed): no timestamps, no absolute paths beyond what the
// caller passed in, and JSON keys in fixed order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "faircd/common.hpp"
#include "faircd/detectors.hpp"
#include "faircd/graph.hpp"
#include "faircd/group_fairness.hpp"
#include "faircd/individual_bias.hpp"
#include "faircd/partition.hpp"
#include "faircd/perturbation.hpp"
#include "faircd/quality.hpp"
#include "faircd/rng.hpp"
#include "faircd/svg.hpp"
#include "faircd/synthgen.hpp"

namespace faircd {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::ofstream open_out(const fs::path& p) {
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot write " + p.string());
  return os;
}

inline std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  return in;
}

inline void ensure_dir(const fs::path& d) {
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec || !fs::is_directory(d)) throw IoError("cannot create output directory " + d.string());
}

inline ordered_json to_json(const AbcdParams& p) {
  ordered_json j;
  j["n"] = p.n;
  j["gamma"] = p.gamma;
  j["d_min"] = p.d_min;
  j["d_max"] = p.d_max;
  j["d_max_iter"] = p.d_max_iter;
  j["beta"] = p.beta;
  j["c_min"] = p.c_min;
  j["c_max"] = p.c_max;
  j["c_max_iter"] = p.c_max_iter;
  j["xi"] = p.xi;
  j["seed"] = p.seed;
  return j;
}

inline ordered_json opt_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

inline std::string opt_csv(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }

}  // namespace detail

// ---------------------------------------------------------------------------
// generate

/// Writes `<prefix>.edges`, `<prefix>.partition` and `<prefix>.json` into
/// out_dir and returns their paths.
inline std::vector<fs::path> write_synthetic(const SyntheticGraph& sg, const ordered_json& provenance,
                                             const fs::path& out_dir, const std::string& prefix) {
  detail::ensure_dir(out_dir);
  const auto edges = out_dir / (prefix + ".edges");
  const auto part = out_dir / (prefix + ".partition");
  const auto meta = out_dir / (prefix + ".json");
  {
    auto os = detail::open_out(edges);
    os << "# " << sg.graph.num_nodes() << " nodes, " << sg.graph.num_edges() << " edges\n";
    write_edge_list(os, sg.graph);
  }
  {
    auto os = detail::open_out(part);
    write_partition(os, sg.planted);
  }
  {
    auto os = detail::open_out(meta);
    os << provenance.dump(2) << '\n';
  }
  return {edges, part, meta};
}

inline std::vector<fs::path> cmd_generate_abcd(const AbcdParams& p, const fs::path& out_dir,
                                               const std::string& prefix = "abcd") {
  const auto sg = generate_abcd_lite(p);
  ordered_json prov;
  prov["tool"] = "faircd";
  prov["version"] = kVersion;
  prov["generator"] = "abcd-lite";
  prov["params"] = detail::to_json(p);
  prov["result"] = {{"n", sg.graph.num_nodes()},
                    {"edges", sg.graph.num_edges()},
                    {"communities", sg.planted.num_communities()},
                    {"background_fraction", sg.stats.background_fraction},
                    {"diverted_stubs", sg.stats.diverted_stubs},
                    {"dropped_stubs", sg.stats.dropped_stubs},
                    {"size_attempts", sg.stats.size_attempts}};
  return write_synthetic(sg, prov, out_dir, prefix);
}

struct TwoCommunityParams {
  std::size_t n = 100;
  double minority = 0.2;
  double intra_p = 0.1;
  double inter_p = 0.01;
  std::uint64_t seed = 0;
};

inline std::vector<fs::path> cmd_generate_two_community(const TwoCommunityParams& p,
                                                        const fs::path& out_dir,
                                                        const std::string& prefix = "two_community") {
  const auto sg = generate_two_community(p.n, p.minority, p.intra_p, p.inter_p, p.seed);
  ordered_json prov;
  prov["tool"] = "faircd";
  prov["version"] = kVersion;
  prov["generator"] = "two-community";
  prov["params"] = {{"n", p.n}, {"minority", p.minority}, {"intra_p", p.intra_p},
                    {"inter_p", p.inter_p}, {"seed", p.seed}};
  prov["result"] = {{"n", sg.graph.num_nodes()},
                    {"edges", sg.graph.num_edges()},
                    {"minority_size", sg.planted.size_of(0)},
                    {"majority_size", sg.planted.size_of(1)}};
  return write_synthetic(sg, prov, out_dir, prefix);
}

// ---------------------------------------------------------------------------
// evaluate

/// One input graph with its ground truth: either files on disk or an
/// ABCD-lite draw whose planted partition serves as ground truth.
struct GraphInput {
  std::string name;
  fs::path edges;
  fs::path ground_truth;
  IdMode id_mode = IdMode::raw;
  std::optional<AbcdParams> abcd;
};

struct RunConfig {
  std::vector<GraphInput> graphs;
  std::vector<DetectorSpec> detectors;
  std::set<std::string> metrics{"ib", "quality", "phi"};
  NmiNorm nmi_norm = NmiNorm::arithmetic;
  bool oracle = false;   // use the O(n^2) IB reference instead of the fast path
  bool details = false;  // write per-node IB and per-community Φ points
  unsigned workers = 1;
  std::string label = "run";
  fs::path out_dir = "out";
  std::uint64_t seed = 0;

  void validate() const {
    if (graphs.empty()) throw ConfigError("evaluate needs at least one input graph");
    for (const auto& g : graphs) {
      const bool file = !g.edges.empty();
      if (file == g.abcd.has_value()) {
        throw ConfigError("graph '" + g.name + "' must come from exactly one source (file or generator)");
      }
      if (file && g.ground_truth.empty()) {
        throw ConfigError("graph '" + g.name + "' has no ground-truth partition");
      }
      if (!file && !g.ground_truth.empty()) {
        throw ConfigError("graph '" + g.name + "' has both a planted and a file ground truth");
      }
    }
    if (detectors.empty()) throw ConfigError("evaluate needs at least one detector");
    std::set<std::string> labels;
    for (const auto& d : detectors) {
      if (!labels.insert(d.label()).second) {
        throw ConfigError("duplicate detector label '" + d.label() + "' (add label=NAME)");
      }
    }
    for (const auto& m : metrics) {
      if (m != "ib" && m != "quality" && m != "phi") {
        throw ConfigError("unknown metric group '" + m + "' (expected ib|quality|phi)");
      }
    }
  }
};

inline std::string nmi_norm_name(NmiNorm n) {
  switch (n) {
    case NmiNorm::arithmetic: return "arithmetic";
    case NmiNorm::max: return "max";
    case NmiNorm::min: return "min";
    case NmiNorm::geometric: return "geometric";
  }
  return "?";
}

/// Scalar metric columns in the flat results CSV, in order.
inline std::vector<std::string> scalar_metric_names() {
  std::vector<std::string> names{"ib_g", "mean_ib", "modularity", "nmi", "ari", "nf1"};
  for (auto p : kPropertyNames) {
    for (auto s : kScoreNames) names.push_back("phi_" + std::string(p) + "_" + std::string(s));
  }
  return names;
}

namespace detail {

/// Flattens one cell into metric name -> value (nullopt = missing).
inline std::map<std::string, std::optional<double>> cell_metrics(const ordered_json& cell) {
  std::map<std::string, std::optional<double>> out;
  for (const auto& name : scalar_metric_names()) out[name] = std::nullopt;
  auto take = [&](const char* group, const std::string& key, const std::string& name) {
    if (cell.contains(group) && cell[group].is_object() && cell[group].contains(key) &&
        cell[group][key].is_number()) {
      out[name] = cell[group][key].get<double>();
    }
  };
  take("bias", "ib_g", "ib_g");
  take("bias", "mean_ib", "mean_ib");
  for (const char* q : {"modularity", "nmi", "ari", "nf1"}) take("quality", q, q);
  if (cell.contains("phi") && cell["phi"].is_object()) {
    for (auto p : kPropertyNames) {
      const std::string ps(p);
      if (!cell["phi"].contains(ps)) continue;
      for (auto s : kScoreNames) {
        const auto& v = cell["phi"][ps][std::string(s)];
        if (v.is_number()) out["phi_" + ps + "_" + std::string(s)] = v.get<double>();
      }
    }
  }
  return out;
}

struct AggregateStat {
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};

inline std::optional<AggregateStat> aggregate_stat(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  const auto ms = mean_std(xs);
  return AggregateStat{ms.mean, ms.std, xs.size()};
}

inline std::string safe_name(std::string s) {
  for (auto& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return s;
}

}  // namespace detail

/// Runs every detector on every graph and scores it. Detector failures are
/// recorded in their cell and reported on `log`; they never abort the run.
/// Writes report.json, results.csv and aggregate.csv into cfg.out_dir.
inline ordered_json cmd_evaluate(const RunConfig& cfg, std::ostream& log = std::cerr) {
  cfg.validate();
  detail::ensure_dir(cfg.out_dir);

  ordered_json report;
  report["schema_version"] = kReportSchemaVersion;
  report["tool"] = "faircd";
  report["version"] = kVersion;
  ordered_json prov;
  prov["label"] = cfg.label;
  prov["seed"] = cfg.seed;
  prov["nmi_norm"] = nmi_norm_name(cfg.nmi_norm);
  prov["oracle"] = cfg.oracle;
  prov["metrics"] = std::vector<std::string>(cfg.metrics.begin(), cfg.metrics.end());
  prov["graphs"] = ordered_json::array();
  prov["detectors"] = ordered_json::array();
  for (const auto& d : cfg.detectors) prov["detectors"].push_back(d.to_string());
  ordered_json cells = ordered_json::array();

  const bool want_ib = cfg.metrics.contains("ib");
  const bool want_quality = cfg.metrics.contains("quality");
  const bool want_phi = cfg.metrics.contains("phi");

  for (std::size_t gi = 0; gi < cfg.graphs.size(); ++gi) {
    const auto& in = cfg.graphs[gi];
    Graph graph;
    Partition gt;
    NodeMap map;
    ordered_json gprov;
    gprov["name"] = in.name;
    if (in.abcd) {
      const auto sg = generate_abcd_lite(*in.abcd);
      graph = sg.graph;
      gt = sg.planted;
      map = NodeMap::identity(graph.num_nodes());
      gprov["source"] = "abcd-lite";
      gprov["params"] = detail::to_json(*in.abcd);
    } else {
      auto es = detail::open_in(in.edges);
      auto loaded = load_edge_list(es, in.id_mode);
      graph = std::move(loaded.graph);
      map = std::move(loaded.mapping);
      auto ps = detail::open_in(in.ground_truth);
      gt = load_partition(ps, graph.num_nodes(), in.id_mode == IdMode::remap ? &map : nullptr);
      gprov["source"] = "file";
      gprov["edges"] = in.edges.generic_string();
      gprov["ground_truth"] = in.ground_truth.generic_string();
      gprov["id_mode"] = in.id_mode == IdMode::raw ? "raw" : "remap";
      if (graph.dropped_duplicates() + graph.dropped_self_loops() > 0) {
        log << "warning: " << in.name << ": dropped " << graph.dropped_duplicates()
            << " duplicate edges and " << graph.dropped_self_loops() << " self-loops\n";
      }
      if (in.id_mode == IdMode::remap && cfg.details) {
        auto os = detail::open_out(cfg.out_dir / "details" / (detail::safe_name(in.name) + ".nodemap.csv"));
        write_node_map(os, map);
      }
    }
    gprov["n"] = graph.num_nodes();
    gprov["edges_count"] = graph.num_edges();
    gprov["k_gt"] = gt.num_communities();
    prov["graphs"].push_back(gprov);

    for (const auto& spec_in : cfg.detectors) {
      DetectorSpec spec = spec_in;
      if ((spec.name == "louvain" || spec.name == "label_propagation" || spec.name == "lpa") &&
          !spec.params.contains("seed")) {
        spec.params["seed"] = std::to_string(derive_seed(cfg.seed, "detector:" + spec.label(), gi));
      }
      ordered_json cell;
      cell["graph"] = in.name;
      cell["detector"] = spec.label();
      cell["spec"] = spec.to_string();
      cell["status"] = "ok";
      cell["error"] = nullptr;
      ordered_json errors = ordered_json::object();
      try {
        const Partition pred = run_detector(spec, graph, &map);
        cell["k_pred"] = pred.num_communities();
        if (want_ib) {
          try {
            const auto br = cfg.oracle ? ib_all_naive(gt, pred) : ib_all_fast(gt, pred, cfg.workers);
            cell["bias"] = {{"ib_g", br.ib_g}, {"mean_ib", br.mean_ib}, {"n", br.ib.size()},
                            {"k_gt", br.k_gt}, {"k_pred", br.k_pred}};
            if (cfg.details) {
              const auto stem = detail::safe_name(in.name + "__" + spec.label());
              auto os = detail::open_out(cfg.out_dir / "details" / (stem + ".ib.csv"));
              write_bias_csv(os, br);
              auto js = detail::open_out(cfg.out_dir / "details" / (stem + ".ib.json"));
              write_bias_summary_json(js, br);
            }
          } catch (const Error& e) {
            errors["bias"] = e.what();
          }
        }
        if (want_quality) {
          try {
            const ContingencyTable ct(gt, pred);
            ordered_json q;
            try {
              q["modularity"] = modularity(graph, pred);
            } catch (const Error& e) {
              q["modularity"] = nullptr;
              errors["modularity"] = e.what();
            }
            q["nmi"] = nmi(ct, cfg.nmi_norm);
            q["ari"] = ari(ct);
            q["nf1"] = nf1(ct);
            cell["quality"] = q;
          } catch (const Error& e) {
            errors["quality"] = e.what();
          }
        }
        if (want_phi) {
          try {
            const auto gf = phi(graph, gt, pred);
            ordered_json pj;
            for (std::size_t p = 0; p < 3; ++p) {
              ordered_json row;
              for (std::size_t s = 0; s < 3; ++s) row[std::string(kScoreNames[s])] = detail::opt_json(gf.phi[p][s]);
              pj[std::string(kPropertyNames[p])] = row;
            }
            cell["phi"] = pj;
            if (cfg.details) {
              const auto stem = detail::safe_name(in.name + "__" + spec.label());
              auto os = detail::open_out(cfg.out_dir / "details" / (stem + ".phi_points.csv"));
              write_phi_points_csv(os, gf);
            }
          } catch (const Error& e) {
            errors["phi"] = e.what();
          }
        }
      } catch (const Error& e) {
        cell["status"] = "failed";
        cell["error"] = e.what();
        log << "warning: detector " << spec.label() << " failed on " << in.name << ": " << e.what() << '\n';
      }
      if (!errors.empty()) {
        cell["metric_errors"] = errors;
        for (auto it = errors.begin(); it != errors.end(); ++it) {
          log << "warning: " << in.name << "/" << spec.label() << ": " << it.key() << " unavailable: "
              << it.value().get<std::string>() << '\n';
        }
      }
      cells.push_back(cell);
    }
  }
  report["provenance"] = prov;
  report["cells"] = cells;

  // Aggregate per detector over graphs, in detector order.
  ordered_json agg = ordered_json::array();
  for (const auto& d : cfg.detectors) {
    ordered_json a;
    a["detector"] = d.label();
    std::size_t ok = 0, failed = 0;
    std::map<std::string, std::vector<double>> values;
    for (const auto& c : cells) {
      if (c["detector"] != d.label()) continue;
      if (c["status"] != "ok") {
        ++failed;
        continue;
      }
      ++ok;
      for (const auto& [name, v] : detail::cell_metrics(c)) {
        if (v) values[name].push_back(*v);
      }
    }
    a["graphs_ok"] = ok;
    a["graphs_failed"] = failed;
    ordered_json ms;
    for (const auto& name : scalar_metric_names()) {
      const auto st = detail::aggregate_stat(values[name]);
      ms[name] = st ? ordered_json{{"mean", st->mean}, {"std", st->std}, {"count", st->count}}
                    : ordered_json(nullptr);
    }
    a["metrics"] = ms;
    agg.push_back(a);
  }
  report["aggregate"] = agg;

  {
    auto os = detail::open_out(cfg.out_dir / "report.json");
    os << report.dump(2) << '\n';
  }
  {
    auto os = detail::open_out(cfg.out_dir / "results.csv");
    os << "graph,detector,status,k_pred";
    for (const auto& name : scalar_metric_names()) os << ',' << name;
    os << ",error\n";
    for (const auto& c : cells) {
      os << c["graph"].get<std::string>() << ',' << c["detector"].get<std::string>() << ','
         << c["status"].get<std::string>() << ',';
      if (c.contains("k_pred")) os << c["k_pred"].get<std::size_t>();
      const auto m = detail::cell_metrics(c);
      for (const auto& name : scalar_metric_names()) os << ',' << detail::opt_csv(m.at(name));
      std::string err = c["error"].is_string() ? c["error"].get<std::string>() : "";
      std::replace(err.begin(), err.end(), ',', ';');
      std::replace(err.begin(), err.end(), '\n', ' ');
      os << ',' << err << '\n';
    }
  }
  {
    auto os = detail::open_out(cfg.out_dir / "aggregate.csv");
    os << "detector,metric,mean,std,count\n";
    for (const auto& a : agg) {
      for (const auto& name : scalar_metric_names()) {
        const auto& m = a["metrics"][name];
        os << a["detector"].get<std::string>() << ',' << name << ',';
        if (m.is_object()) {
          os << detail::fmt_double(m["mean"].get<double>()) << ',' << detail::fmt_double(m["std"].get<double>())
             << ',' << m["count"].get<std::size_t>();
        } else {
          os << ",,0";
        }
        os << '\n';
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// sweep

/// One CSV per (scenario, target): `sweep_<scenario>_<target>.csv`, plus
/// `sweep_<scenario>_<target>_runs.csv` when per_run is set.
inline std::vector<fs::path> cmd_sweep(const std::vector<Scenario>& scenarios,
                                       const std::vector<Target>& targets, const SweepConfig& base,
                                       const fs::path& out_dir, bool per_run = false) {
  if (scenarios.empty() || targets.empty()) throw ConfigError("sweep needs a scenario and a target");
  detail::ensure_dir(out_dir);
  std::vector<fs::path> files;
  for (auto sc : scenarios) {
    for (auto t : targets) {
      SweepConfig cfg = base;
      cfg.scenario = sc;
      cfg.target = t;
      const auto res = run_sweep(cfg);
      const std::string stem = "sweep_" + std::string(to_string(sc)) + "_" + std::string(to_string(t));
      const auto path = out_dir / (stem + ".csv");
      auto os = detail::open_out(path);
      write_sweep_csv(os, res);
      files.push_back(path);
      if (per_run) {
        const auto rp = out_dir / (stem + "_runs.csv");
        auto rs = detail::open_out(rp);
        write_sweep_runs_csv(rs, res);
        files.push_back(rp);
      }
    }
  }
  return files;
}

// ---------------------------------------------------------------------------
// report

/// Reads evaluate reports and writes `report_long.csv`
/// (`detector,graph_group,ib_g,metric_name,metric_value,ib_g_std,metric_std`)
/// plus one `scatter_<metric>.svg` per requested metric. Values are means
/// over each report's graphs; the std columns are the error bars.
inline std::vector<fs::path> cmd_report(const std::vector<fs::path>& reports,
                                        const std::vector<std::string>& metrics, const fs::path& out_dir) {
  if (reports.empty()) throw ConfigError("report needs at least one run report");
  const auto known = scalar_metric_names();
  for (const auto& m : metrics) {
    if (std::find(known.begin(), known.end(), m) == known.end() || m == "ib_g") {
      throw ConfigError("unknown report metric '" + m + "'");
    }
  }
  detail::ensure_dir(out_dir);

  struct Row {
    std::string detector, group;
    std::optional<detail::AggregateStat> ib_g;
    std::map<std::string, std::optional<detail::AggregateStat>> metric;
  };
  std::vector<Row> rows;
  for (const auto& path : reports) {
    ordered_json j;
    try {
      auto in = detail::open_in(path);
      j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ": not a JSON report (" + e.what() + ")");
    }
    if (!j.contains("schema_version") || j["schema_version"] != kReportSchemaVersion) {
      throw ConfigError(path.string() + ": incompatible report schema version (expected " +
                        std::to_string(kReportSchemaVersion) + ")");
    }
    const std::string group = j["provenance"].value("label", path.stem().string());
    for (const auto& a : j["aggregate"]) {
      Row r;
      r.detector = a["detector"].get<std::string>();
      r.group = group;
      auto get = [&](const std::string& name) -> std::optional<detail::AggregateStat> {
        const auto& m = a["metrics"][name];
        if (!m.is_object()) return std::nullopt;
        return detail::AggregateStat{m["mean"].get<double>(), m["std"].get<double>(), m["count"].get<std::size_t>()};
      };
      r.ib_g = get("ib_g");
      for (const auto& m : metrics) r.metric[m] = get(m);
      rows.push_back(std::move(r));
    }
  }

  std::vector<fs::path> files;
  const auto csv_path = out_dir / "report_long.csv";
  {
    auto os = detail::open_out(csv_path);
    os << "detector,graph_group,ib_g,metric_name,metric_value,ib_g_std,metric_std\n";
    for (const auto& m : metrics) {
      for (const auto& r : rows) {
        const auto& v = r.metric.at(m);
        os << r.detector << ',' << r.group << ',' << (r.ib_g ? detail::fmt_double(r.ib_g->mean) : "") << ','
           << m << ',' << (v ? detail::fmt_double(v->mean) : "") << ','
           << (r.ib_g ? detail::fmt_double(r.ib_g->std) : "") << ',' << (v ? detail::fmt_double(v->std) : "")
           << '\n';
      }
    }
  }
  files.push_back(csv_path);

  for (const auto& m : metrics) {
    ScatterPlot plot;
    plot.x_label = "IB_G";
    plot.y_label = m;
    plot.phi_guide = m.rfind("phi_", 0) == 0;
    for (const auto& r : rows) {
      const auto& v = r.metric.at(m);
      if (!r.ib_g || !v) continue;  // missing is not plotted as zero
      plot.points.push_back({r.ib_g->mean, v->mean, r.ib_g->std, v->std, r.detector + " (" + r.group + ")"});
    }
    const auto svg_path = out_dir / ("scatter_" + m + ".svg");
    auto os = detail::open_out(svg_path);
    write_svg(os, plot);
    files.push_back(svg_path);
  }
  return files;
}

}  // namespace faircd
