#include "gnncolor/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "gnncolor/baselines.hpp"
#include "gnncolor/errors.hpp"
#include "gnncolor/gradcheck.hpp"
#include "gnncolor/report.hpp"
#include "gnncolor/timetable.hpp"

namespace gnncolor::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path.string());
  out << text;
}

void write_json_file(const fs::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

struct LoadedGraph {
  Graph graph;
  std::string name;
};

LoadedGraph load_graph(const std::string& path, std::ostream& err) {
  ParsedDimacs parsed = parse_dimacs_file(path);
  if (parsed.edge_count_mismatch)
    err << "warning: " << path << ": header declares " << parsed.declared_edges
        << " edges, file contains " << parsed.graph.edge_count() << "\n";
  return {std::move(parsed.graph), stem_of(path)};
}

json graph_summary_json(const std::string& path, const Graph& g) {
  return json{{"file", path}, {"nodes", g.n}, {"edges", g.edge_count()}};
}

}  // namespace

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.k < 1) {
      err << "error: color count must be >= 1\n";
      return kExitError;
    }
    const LoadedGraph lg = load_graph(opt.graph_path, err);

    const MultiResult mr =
        train_multi(lg.graph, opt.k, opt.common.model, opt.common.loss, opt.common.optim,
                    opt.common.seed, opt.common.threads);
    const RunReport& best = mr.best();
    // never trust trainer bookkeeping for the headline number
    const int conflicts = count_conflicts(lg.graph, best.best_assignment.colors);

    fs::create_directories(opt.out_dir);
    const std::string base = lg.name + ".k" + std::to_string(opt.k);

    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["graph"] = graph_summary_json(opt.graph_path, lg.graph);
    report["k"] = opt.k;
    report["best_run_index"] = mr.best_index;
    report["best_conflicts"] = conflicts;
    json runs = json::array();
    for (const RunReport& r : mr.reports) runs.push_back(run_report_to_json(r));
    report["runs"] = runs;
    const fs::path report_path = fs::path(opt.out_dir) / (base + ".report.json");
    write_json_file(report_path, report);

    if (opt.write_dot) {
      const fs::path dot_path = fs::path(opt.out_dir) / (base + ".dot");
      write_text_file(dot_path, export_dot(lg.graph, best.best_assignment));
    }
    if (opt.write_trajectories) {
      for (const RunReport& r : mr.reports) {
        std::ostringstream csv;
        write_trajectory_csv(r, csv);
        const fs::path csv_path =
            fs::path(opt.out_dir) / (base + ".seed" + std::to_string(r.seed) + ".csv");
        write_text_file(csv_path, csv.str());
      }
    }
    if (!opt.checkpoint_out.empty())
      write_text_file(opt.checkpoint_out, params_to_json(best.final_params, best.model_cfg));

    out << lg.name << ": n=" << lg.graph.n << " m=" << lg.graph.edge_count()
        << " k=" << opt.k << "\n";
    out << "best conflicts: " << conflicts << " (seed " << best.seed << ", "
        << to_string(best.stop_reason) << " after " << best.iterations_run
        << " iterations, " << std::fixed << std::setprecision(1)
        << best.wall_time_seconds << "s)\n";
    out << "report: " << report_path.string() << "\n";
    return conflicts == 0 ? kExitSolved : kExitConflicts;
  } catch (const TrainingFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

std::vector<BenchEntry> default_bench_entries() {
  return {{"myciel5", 6},   {"myciel6", 7},  {"queen5-5", 7},   {"queen6-6", 7},
          {"queen7-7", 7},  {"queen8-8", 9}, {"queen9-9", 10},  {"queen8-12", 12},
          {"queen11-11", 11}, {"queen13-13", 13}};
}

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  const std::vector<BenchEntry> entries =
      opt.entries.empty() ? default_bench_entries() : opt.entries;

  struct Row {
    std::string name;
    int nodes = 0, edges = 0, k = 0;
    int conflicts = -1;
    int colors = 0;
    long iterations = 0;
    double best_seconds = 0.0, total_seconds = 0.0;
    std::string error;
    bool ok() const { return error.empty(); }
    double error_rate() const { return edges > 0 ? double(conflicts) / edges : 0.0; }
  };

  std::vector<Row> rows;
  json entries_json = json::array();
  bool any_failed = false;

  try {
    fs::create_directories(opt.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  for (const BenchEntry& entry : entries) {
    Row row;
    row.name = entry.name;
    row.k = entry.k;
    const std::string path = (fs::path(opt.data_dir) / (entry.name + ".col")).string();
    try {
      const LoadedGraph lg = load_graph(path, err);
      row.nodes = lg.graph.n;
      row.edges = lg.graph.edge_count();
      const MultiResult mr =
          train_multi(lg.graph, entry.k, opt.common.model, opt.common.loss,
                      opt.common.optim, opt.common.seed, opt.common.threads);
      const RunReport& best = mr.best();
      row.conflicts = count_conflicts(lg.graph, best.best_assignment.colors);
      row.colors = colors_used(best.best_assignment);
      row.iterations = best.iterations_run;
      row.best_seconds = best.wall_time_seconds;
      for (const RunReport& r : mr.reports) row.total_seconds += r.wall_time_seconds;

      json ej;
      ej["name"] = entry.name;
      ej["graph"] = graph_summary_json(path, lg.graph);
      ej["k"] = entry.k;
      ej["conflicts"] = row.conflicts;
      ej["colors_used"] = row.colors;
      ej["normalized_error_rate"] = row.error_rate();
      ej["best_run"] = run_report_to_json(best);
      ej["total_seconds"] = row.total_seconds;
      write_json_file(fs::path(opt.out_dir) / (entry.name + ".report.json"), ej);
      entries_json.push_back(ej);
    } catch (const std::exception& e) {
      row.error = e.what();
      any_failed = true;
      err << "error: " << entry.name << ": " << e.what() << "\n";
      entries_json.push_back(json{{"name", entry.name}, {"error", row.error}});
    }
    rows.push_back(row);
  }

  // rendered table
  out << std::left << std::setw(12) << "graph" << std::right << std::setw(7) << "nodes"
      << std::setw(8) << "edges" << std::setw(4) << "k" << std::setw(11) << "conflicts"
      << std::setw(8) << "colors" << std::setw(10) << "err_rate" << std::setw(9) << "iters"
      << std::setw(9) << "best_s" << std::setw(9) << "total_s" << "\n";
  std::ostringstream csv;
  csv << "graph,nodes,edges,k,conflicts,colors_used,error_rate,iterations,best_seconds,"
         "total_seconds\n";
  for (const Row& r : rows) {
    if (!r.ok()) {
      out << std::left << std::setw(12) << r.name << "  FAILED: " << r.error << "\n";
      csv << r.name << ",,,,,,,,,\n";
      continue;
    }
    out << std::left << std::setw(12) << r.name << std::right << std::setw(7) << r.nodes
        << std::setw(8) << r.edges << std::setw(4) << r.k << std::setw(11) << r.conflicts
        << std::setw(8) << r.colors << std::setw(9) << std::fixed << std::setprecision(2)
        << r.error_rate() * 100.0 << "%" << std::setw(9) << r.iterations << std::setw(9)
        << std::setprecision(1) << r.best_seconds << std::setw(9) << std::setprecision(1)
        << r.total_seconds << "\n";
    csv << r.name << ',' << r.nodes << ',' << r.edges << ',' << r.k << ',' << r.conflicts
        << ',' << r.colors << ',' << r.error_rate() << ',' << r.iterations << ','
        << r.best_seconds << ',' << r.total_seconds << "\n";
  }

  try {
    write_text_file(fs::path(opt.out_dir) / "bench_summary.csv", csv.str());
    json summary;
    summary["schema_version"] = kReportSchemaVersion;
    summary["entries"] = entries_json;
    write_json_file(fs::path(opt.out_dir) / "bench_summary.json", summary);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  if (any_failed) return kExitError;
  for (const Row& r : rows)
    if (r.conflicts > 0) return kExitConflicts;
  return kExitSolved;
}

int cmd_ablate(const AblateOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.k < 1) {
      err << "error: color count must be >= 1\n";
      return kExitError;
    }
    const LoadedGraph lg = load_graph(opt.graph_path, err);
    fs::create_directories(opt.out_dir);

    LossConfig utility_only = opt.common.loss;
    utility_only.lambda = 0.0;
    LossConfig combined = opt.common.loss;
    combined.lambda = opt.lambda;

    // identical seed: the only difference between the arms is the loss
    const RunReport run_u =
        train_once(lg.graph, opt.k, opt.common.model, utility_only, opt.common.optim,
                   opt.common.seed);
    const RunReport run_c = train_once(lg.graph, opt.k, opt.common.model, combined,
                                       opt.common.optim, opt.common.seed);

    const std::string base = lg.name + ".k" + std::to_string(opt.k);
    auto dump = [&](const RunReport& r, const std::string& tag) {
      std::ostringstream csv;
      write_trajectory_csv(r, csv);
      const fs::path p = fs::path(opt.out_dir) / (base + "." + tag + ".csv");
      write_text_file(p, csv.str());
      return p.string();
    };
    std::ostringstream lam;
    lam << "lambda" << opt.lambda;
    const std::string path_u = dump(run_u, "lambda0");
    const std::string path_c = dump(run_c, lam.str());

    auto mean_abs_delta = [](const RunReport& r) {
      if (r.conflict_trajectory.size() < 2) return 0.0;
      double acc = 0.0;
      for (std::size_t i = 1; i < r.conflict_trajectory.size(); ++i)
        acc += std::abs(r.conflict_trajectory[i].conflicts -
                        r.conflict_trajectory[i - 1].conflicts);
      return acc / static_cast<double>(r.conflict_trajectory.size() - 1);
    };

    out << lg.name << " k=" << opt.k << " seed=" << opt.common.seed << "\n";
    out << "utility-only arm:  best " << run_u.best_assignment.conflicts << " conflicts, "
        << run_u.iterations_run << " iters, mean |d conflicts| " << std::fixed
        << std::setprecision(3) << mean_abs_delta(run_u) << " -> " << path_u << "\n";
    out << "combined arm:      best " << run_c.best_assignment.conflicts << " conflicts, "
        << run_c.iterations_run << " iters, mean |d conflicts| " << std::fixed
        << std::setprecision(3) << mean_abs_delta(run_c) << " -> " << path_c << "\n";
    return kExitSolved;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_taxi(const TaxiOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.taxis < 1) {
      err << "error: taxi count must be >= 1\n";
      return kExitError;
    }
    const Timetable t = parse_timetable_csv_file(opt.timetable_path);
    const Graph g = encode_intervals(t);
    const Assignment feasibility = dsatur(g);

    const MultiResult mr = train_multi(g, opt.taxis, opt.common.model, opt.common.loss,
                                       opt.common.optim, opt.common.seed,
                                       opt.common.threads);
    const RunReport& best = mr.best();
    const int conflicts = count_conflicts(g, best.best_assignment.colors);

    std::vector<std::vector<std::string>> groups(opt.taxis);
    for (int v = 0; v < g.n; ++v)
      groups[best.best_assignment.colors[v]].push_back(t.requests[v].id);

    out << "requests: " << g.n << ", overlap edges: " << g.edge_count() << "\n";
    out << "taxis available: " << opt.taxis << " (greedy feasibility bound: "
        << feasibility.k << ")\n";
    int non_empty = 0;
    for (int c = 0; c < opt.taxis; ++c) {
      if (groups[c].empty()) continue;
      ++non_empty;
      out << "taxi " << c << ":";
      for (const auto& id : groups[c]) out << ' ' << id;
      out << "\n";
    }
    out << "groups used: " << non_empty << ", conflicts: " << conflicts << "\n";
    out << (conflicts == 0 ? "all requests satisfiable with the available taxis\n"
                           : "NOT all requests satisfiable with the available taxis\n");

    if (!opt.json_out.empty()) {
      json j;
      j["schema_version"] = kReportSchemaVersion;
      j["timetable"] = opt.timetable_path;
      j["taxis"] = opt.taxis;
      j["conflicts"] = conflicts;
      j["satisfiable"] = conflicts == 0;
      j["greedy_feasibility_colors"] = feasibility.k;
      json gj = json::array();
      for (int c = 0; c < opt.taxis; ++c) gj.push_back(groups[c]);
      j["groups"] = gj;
      j["best_run"] = run_report_to_json(best);
      write_json_file(opt.json_out, j);
    }
    return conflicts == 0 ? kExitSolved : kExitConflicts;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_gradcheck(const GradcheckOptions& opt, std::ostream& out, std::ostream&) {
  const GradCheckReport report = run_gradient_checks(opt.seed);
  for (const auto& c : report.cases) {
    out << std::left << std::setw(20) << c.name;
    if (c.skipped) {
      out << "SKIP  " << c.note << "\n";
    } else {
      out << (c.passed() ? "PASS" : "FAIL") << "  max err " << std::scientific
          << std::setprecision(3) << c.max_error << " (tol " << kGradCheckTol << ")\n";
    }
  }
  out << (report.all_passed() ? "gradient checks passed\n" : "gradient checks FAILED\n");
  return report.all_passed() ? kExitSolved : kExitConflicts;
}

int cmd_baseline(const BaselineOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const LoadedGraph lg = load_graph(opt.graph_path, err);
    Assignment a;
    long moves = 0;
    if (opt.algorithm == "dsatur") {
      a = dsatur(lg.graph);
      out << "dsatur: " << a.k << " colors, " << a.conflicts << " conflicts\n";
    } else if (opt.algorithm == "tabucol") {
      if (opt.k < 1) {
        err << "error: tabucol needs a color count >= 1\n";
        return kExitError;
      }
      TabuConfig cfg;
      cfg.max_moves = opt.max_moves;
      cfg.seed = opt.seed;
      TabuResult r = tabucol(lg.graph, opt.k, cfg);
      a = std::move(r.assignment);
      moves = r.moves;
      out << "tabucol: k=" << opt.k << ", " << a.conflicts << " conflicts after " << moves
          << " moves\n";
    } else {
      err << "error: unknown baseline '" << opt.algorithm << "'\n";
      return kExitError;
    }
    if (!opt.json_out.empty()) {
      json j;
      j["schema_version"] = kReportSchemaVersion;
      j["algorithm"] = opt.algorithm;
      j["graph"] = graph_summary_json(opt.graph_path, lg.graph);
      j["moves"] = moves;
      j["assignment"] = assignment_to_json(a);
      write_json_file(opt.json_out, j);
    }
    return a.conflicts == 0 ? kExitSolved : kExitConflicts;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace gnncolor::cli
