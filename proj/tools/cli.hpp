#pragma once

// faircd command-line front end. Kept in a header so tests can drive it
// in-process; tools/faircd.cpp is a thin main().

#include <filesystem>
#include <iostream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "faircd/runner.hpp"

namespace faircd::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kIoError = 2 };

/// CLI11 config reader for JSON files. Objects nest by subcommand, e.g.
/// {"evaluate": {"detector": ["louvain"], "seed": 3}}; keys are long flag
/// names without the leading dashes.
class ConfigJSON : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return {};
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config root must be a JSON object");
    return flatten(j, "", {});
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static std::vector<CLI::ConfigItem> flatten(const nlohmann::json& j, const std::string& name,
                                              std::vector<std::string> prefix) {
    std::vector<CLI::ConfigItem> out;
    if (j.is_object()) {
      if (!name.empty()) prefix.push_back(name);
      for (auto it = j.begin(); it != j.end(); ++it) {
        auto sub = flatten(*it, it.key(), prefix);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    CLI::ConfigItem item;
    item.name = name;
    item.parents = prefix;
    if (j.is_array()) {
      for (const auto& v : j) item.inputs.push_back(scalar(v));
    } else if (j.is_null()) {
      return out;
    } else {
      item.inputs = {scalar(j)};
    }
    out.push_back(std::move(item));
    return out;
  }
};

namespace detail {

inline void add_abcd_options(CLI::App* app, AbcdParams& p) {
  app->add_option("--n", p.n, "number of nodes")->capture_default_str();
  app->add_option("--gamma", p.gamma, "degree power-law exponent")->capture_default_str();
  app->add_option("--d-min", p.d_min, "minimum degree")->capture_default_str();
  app->add_option("--d-max", p.d_max, "maximum degree")->capture_default_str();
  app->add_option("--d-max-iter", p.d_max_iter, "degree sampling retries")->capture_default_str();
  app->add_option("--beta", p.beta, "community-size power-law exponent")->capture_default_str();
  app->add_option("--c-min", p.c_min, "minimum community size")->capture_default_str();
  app->add_option("--c-max", p.c_max, "maximum community size")->capture_default_str();
  app->add_option("--c-max-iter", p.c_max_iter, "community-size sampling retries")->capture_default_str();
  app->add_option("--xi", p.xi, "fraction of edges in the background graph")->capture_default_str();
}

inline CLI::Option* add_out(CLI::App* app, std::string& out) {
  return app->add_option("--out,-o", out, "output directory (default: $FAIRCD_OUT or ./out)")
      ->envname("FAIRCD_OUT");
}

}  // namespace detail

/// Parses argv and runs one subcommand. Returns the process exit code:
/// 0 success (possibly with per-detector warnings), 1 config or parse error,
/// 2 I/O error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"faircd: individual and group fairness of community detection"};
  app.config_formatter(std::make_shared<ConfigJSON>());
  app.set_config("--config", "", "JSON config mirroring the flags; flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic graph with planted communities");
  gen->require_subcommand(1);
  AbcdParams abcd;
  abcd.n = 1000;
  abcd.c_min = 50;
  abcd.c_max = 200;
  std::string gen_out = "out", gen_prefix;
  auto* gen_abcd = gen->add_subcommand("abcd", "ABCD-lite benchmark graph");
  detail::add_abcd_options(gen_abcd, abcd);
  gen_abcd->add_option("--seed", abcd.seed, "rng seed")->capture_default_str();
  detail::add_out(gen_abcd, gen_out);
  gen_abcd->add_option("--prefix", gen_prefix, "file name prefix (default: abcd)");

  TwoCommunityParams two;
  auto* gen_two = gen->add_subcommand("two-community", "planted minority/majority graph");
  gen_two->add_option("--n", two.n, "number of nodes")->capture_default_str();
  gen_two->add_option("--minority", two.minority, "minority fraction")->capture_default_str();
  gen_two->add_option("--intra-p", two.intra_p, "edge probability inside blocks")->capture_default_str();
  gen_two->add_option("--inter-p", two.inter_p, "edge probability across blocks")->capture_default_str();
  gen_two->add_option("--seed", two.seed, "rng seed")->capture_default_str();
  detail::add_out(gen_two, gen_out);
  gen_two->add_option("--prefix", gen_prefix, "file name prefix (default: two_community)");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "run detectors and score fairness and quality");
  std::vector<std::string> graph_paths, gt_paths, detector_specs;
  std::string id_mode = "raw", nmi_norm = "arithmetic", eval_out = "out", label = "run";
  std::vector<std::string> metric_groups{"ib", "quality", "phi"};
  std::size_t abcd_graphs = 0;
  AbcdParams eval_abcd;
  eval_abcd.n = 2000;
  eval_abcd.c_min = 50;
  eval_abcd.c_max = 400;
  RunConfig rc;
  eval->add_option("--graph", graph_paths, "edge-list file (repeatable)");
  eval->add_option("--ground-truth", gt_paths, "partition file for each --graph, in order");
  eval->add_option("--id-mode", id_mode, "raw|remap node tokens")->check(CLI::IsMember({"raw", "remap"}));
  eval->add_option("--abcd-graphs", abcd_graphs, "generate this many ABCD-lite graphs instead of --graph");
  detail::add_abcd_options(eval, eval_abcd);
  eval->add_option("--detector", detector_specs,
                   "NAME[:key=value,...]; NAME in label_propagation|louvain|cnm|external (repeatable)");
  eval->add_option("--metrics", metric_groups, "metric groups: ib,quality,phi")->delimiter(',');
  eval->add_option("--nmi-norm", nmi_norm, "arithmetic|max|min|geometric")->capture_default_str();
  eval->add_flag("--oracle", rc.oracle, "use the O(n^2) reference IB computation");
  eval->add_flag("--details", rc.details, "write per-node IB and per-community points");
  eval->add_option("--workers", rc.workers, "threads for the IB pass")->capture_default_str();
  eval->add_option("--label", label, "graph-group label used by `report`")->capture_default_str();
  eval->add_option("--seed", rc.seed, "base seed for generators and detectors")->capture_default_str();
  detail::add_out(eval, eval_out);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "perturbation curves of a node's IB");
  SweepConfig sc;
  std::vector<std::string> scenarios{"expand", "shrink", "change"}, targets{"minority", "majority"};
  std::string sweep_out = "out";
  bool per_run = false;
  sweep->add_option("--scenario", scenarios, "expand,shrink,change")->delimiter(',');
  sweep->add_option("--target", targets, "minority,majority")->delimiter(',');
  sweep->add_option("--ratios", sc.ratios, "ascending ratios in [0,1]")->delimiter(',');
  sweep->add_option("--runs", sc.runs, "repetitions per ratio")->capture_default_str();
  sweep->add_option("--n", sc.n, "graph size")->capture_default_str();
  sweep->add_option("--minority", sc.minority_frac, "minority fraction")->capture_default_str();
  sweep->add_option("--seed", sc.seed, "base seed")->capture_default_str();
  sweep->add_flag("--per-run", per_run, "also write one row per repetition");
  detail::add_out(sweep, sweep_out);

  // report
  auto* rep = app.add_subcommand("report", "scatter data of IB_G against other metrics");
  std::vector<std::string> run_reports, report_metrics{"modularity", "nmi", "ari", "nf1"};
  std::string report_out = "out";
  rep->add_option("--run", run_reports, "report.json written by evaluate (repeatable)")->required();
  rep->add_option("--metrics", report_metrics, "metrics plotted against IB_G")->delimiter(',');
  detail::add_out(rep, report_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    if (*gen_abcd) {
      for (const auto& f : cmd_generate_abcd(abcd, gen_out, gen_prefix.empty() ? "abcd" : gen_prefix)) {
        out << f.generic_string() << '\n';
      }
    } else if (*gen_two) {
      for (const auto& f :
           cmd_generate_two_community(two, gen_out, gen_prefix.empty() ? "two_community" : gen_prefix)) {
        out << f.generic_string() << '\n';
      }
    } else if (*eval) {
      if (!graph_paths.empty() && abcd_graphs > 0) {
        throw ConfigError("use either --graph files or --abcd-graphs, not both");
      }
      if (graph_paths.size() != gt_paths.size()) {
        throw ConfigError("every --graph needs a matching --ground-truth");
      }
      std::set<std::string> used;
      for (std::size_t i = 0; i < graph_paths.size(); ++i) {
        GraphInput in;
        in.edges = graph_paths[i];
        in.ground_truth = gt_paths[i];
        in.id_mode = id_mode == "remap" ? IdMode::remap : IdMode::raw;
        in.name = in.edges.stem().string();
        if (!used.insert(in.name).second) in.name += "_" + std::to_string(i);
        rc.graphs.push_back(in);
      }
      for (std::size_t i = 0; i < abcd_graphs; ++i) {
        GraphInput in;
        char name[32];
        std::snprintf(name, sizeof name, "abcd_%03zu", i);
        in.name = name;
        in.abcd = eval_abcd;
        in.abcd->seed = derive_seed(rc.seed, "abcd", i);
        rc.graphs.push_back(in);
      }
      if (detector_specs.empty()) detector_specs = {"louvain"};
      for (const auto& s : detector_specs) rc.detectors.push_back(parse_detector_spec(s));
      rc.metrics = std::set<std::string>(metric_groups.begin(), metric_groups.end());
      rc.nmi_norm = parse_nmi_norm(nmi_norm);
      rc.label = label;
      rc.out_dir = eval_out;
      const auto report = cmd_evaluate(rc, err);
      std::size_t failed = 0;
      for (const auto& c : report["cells"]) failed += c["status"] != "ok";
      out << (eval_out + "/report.json") << '\n' << (eval_out + "/results.csv") << '\n'
          << (eval_out + "/aggregate.csv") << '\n';
      if (failed > 0) err << "warning: " << failed << " detector run(s) failed; see report.json\n";
    } else if (*sweep) {
      std::vector<Scenario> scs;
      std::vector<Target> ts;
      for (const auto& s : scenarios) scs.push_back(parse_scenario(s));
      for (const auto& t : targets) ts.push_back(parse_target(t));
      for (const auto& f : cmd_sweep(scs, ts, sc, sweep_out, per_run)) out << f.generic_string() << '\n';
    } else if (*rep) {
      std::vector<fs::path> paths(run_reports.begin(), run_reports.end());
      for (const auto& f : cmd_report(paths, report_metrics, report_out)) out << f.generic_string() << '\n';
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

}  // namespace faircd::cli
