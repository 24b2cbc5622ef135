// Command-line front end: solve single graphs, run the benchmark suite, the
// lambda ablation, the taxi-scheduling demo, gradient checks, and the
// classical baselines. Exit codes: 0 = zero conflicts, 1 = positive
// conflicts, 2 = usage or input error.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gnncolor/cli.hpp"

namespace {

void add_common_options(CLI::App* cmd, gnncolor::cli::CommonOptions& common,
                        std::string& activation, std::string& conv_sign) {
  cmd->add_option("--d0", common.model.d0, "input embedding width");
  cmd->add_option("--d1", common.model.d1, "hidden width");
  cmd->add_option("--dropout", common.model.dropout_p, "dropout probability in [0,1)");
  cmd->add_option("--activation", activation, "identity | relu | leaky_relu");
  cmd->add_option("--leaky-slope", common.model.leaky_slope, "leaky relu slope");
  cmd->add_flag("--train-embeddings", common.model.train_embeddings,
                "make the node embeddings trainable");
  cmd->add_option("--lambda", common.loss.lambda, "confidence term weight");
  cmd->add_option("--conv-sign", conv_sign, "intent | literal");
  cmd->add_option("--lr", common.optim.lr, "AdamW learning rate");
  cmd->add_option("--weight-decay", common.optim.weight_decay, "decoupled weight decay");
  cmd->add_option("--max-iters", common.optim.max_iters, "iteration budget per run");
  cmd->add_option("--es-window", common.optim.es_window, "early stopping window");
  cmd->add_option("--es-delta", common.optim.es_delta,
                  "early stopping threshold (0 disables)");
  cmd->add_option("--eval-every", common.optim.eval_every, "conflict evaluation cadence");
  cmd->add_option("--restarts", common.optim.restarts, "independent seeded restarts");
  cmd->add_option("--seed", common.seed, "base seed");
  cmd->add_option("--threads", common.threads, "restart concurrency (0 = auto)");
}

void finish_common(gnncolor::cli::CommonOptions& common, const std::string& activation,
                   const std::string& conv_sign) {
  common.model.activation = gnncolor::activation_from_string(activation);
  common.loss.conv_sign = gnncolor::conv_sign_from_string(conv_sign);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unsupervised graph-coloring solver and benchmark harness"};
  app.require_subcommand(1);

  gnncolor::cli::SolveOptions solve_opt;
  gnncolor::cli::BenchOptions bench_opt;
  gnncolor::cli::AblateOptions ablate_opt;
  gnncolor::cli::TaxiOptions taxi_opt;
  gnncolor::cli::GradcheckOptions gradcheck_opt;
  gnncolor::cli::BaselineOptions baseline_opt;

  std::string solve_act = "leaky_relu", solve_conv = "intent";
  std::string bench_act = "leaky_relu", bench_conv = "intent";
  std::string ablate_act = "leaky_relu", ablate_conv = "intent";
  std::string taxi_act = "leaky_relu", taxi_conv = "intent";
  std::string bench_entries;

  CLI::App* solve = app.add_subcommand("solve", "color one DIMACS graph");
  solve->add_option("graph", solve_opt.graph_path, "DIMACS .col file")->required();
  solve->add_option("-k,--colors", solve_opt.k, "number of colors")->required();
  solve->add_option("--out-dir", solve_opt.out_dir, "artifact directory");
  solve->add_flag("--dot", solve_opt.write_dot, "also write a DOT rendering");
  solve->add_flag("--trajectories", solve_opt.write_trajectories,
                  "also write per-run trajectory CSVs");
  solve->add_option("--checkpoint-out", solve_opt.checkpoint_out,
                    "write the best run's parameters as JSON");
  add_common_options(solve, solve_opt.common, solve_act, solve_conv);

  CLI::App* bench = app.add_subcommand("bench", "run the benchmark suite");
  bench->add_option("--data-dir", bench_opt.data_dir, "directory with .col files");
  bench->add_option("--out-dir", bench_opt.out_dir, "artifact directory");
  bench->add_option("--entries", bench_entries,
                    "comma list name:k (default: the stock ten)");
  add_common_options(bench, bench_opt.common, bench_act, bench_conv);

  CLI::App* ablate = app.add_subcommand("ablate", "compare utility-only vs combined loss");
  ablate->add_option("graph", ablate_opt.graph_path, "DIMACS .col file")->required();
  ablate->add_option("-k,--colors", ablate_opt.k, "number of colors")->required();
  ablate->add_option("--ablate-lambda", ablate_opt.lambda,
                     "lambda for the combined arm");
  ablate->add_option("--out-dir", ablate_opt.out_dir, "artifact directory");
  add_common_options(ablate, ablate_opt.common, ablate_act, ablate_conv);

  CLI::App* taxi = app.add_subcommand("taxi", "schedule a timetable onto k taxis");
  taxi->add_option("timetable", taxi_opt.timetable_path, "CSV id,depart,arrive")
      ->required();
  taxi->add_option("-k,--taxis", taxi_opt.taxis, "available taxis")->required();
  taxi->add_option("--json-out", taxi_opt.json_out, "write a JSON grouping report");
  add_common_options(taxi, taxi_opt.common, taxi_act, taxi_conv);

  CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient checks");
  gradcheck->add_option("--seed", gradcheck_opt.seed, "seed for the random cases");

  CLI::App* baseline = app.add_subcommand("baseline", "classical comparators");
  baseline->add_option("algorithm", baseline_opt.algorithm, "dsatur | tabucol")->required();
  baseline->add_option("graph", baseline_opt.graph_path, "DIMACS .col file")->required();
  baseline->add_option("-k,--colors", baseline_opt.k, "color budget (tabucol)");
  baseline->add_option("--max-moves", baseline_opt.max_moves, "tabucol move budget");
  baseline->add_option("--seed", baseline_opt.seed, "tabucol seed");
  baseline->add_option("--json-out", baseline_opt.json_out, "write the assignment as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gnncolor::cli::kExitError;
  }

  try {
    if (solve->parsed()) {
      finish_common(solve_opt.common, solve_act, solve_conv);
      return gnncolor::cli::cmd_solve(solve_opt, std::cout, std::cerr);
    }
    if (bench->parsed()) {
      finish_common(bench_opt.common, bench_act, bench_conv);
      if (!bench_entries.empty()) {
        std::stringstream ss(bench_entries);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto colon = item.rfind(':');
          if (colon == std::string::npos) {
            std::cerr << "error: bench entry '" << item << "' is not name:k\n";
            return gnncolor::cli::kExitError;
          }
          gnncolor::cli::BenchEntry e;
          e.name = item.substr(0, colon);
          e.k = std::stoi(item.substr(colon + 1));
          bench_opt.entries.push_back(std::move(e));
        }
      }
      return gnncolor::cli::cmd_bench(bench_opt, std::cout, std::cerr);
    }
    if (ablate->parsed()) {
      finish_common(ablate_opt.common, ablate_act, ablate_conv);
      return gnncolor::cli::cmd_ablate(ablate_opt, std::cout, std::cerr);
    }
    if (taxi->parsed()) {
      finish_common(taxi_opt.common, taxi_act, taxi_conv);
      return gnncolor::cli::cmd_taxi(taxi_opt, std::cout, std::cerr);
    }
    if (gradcheck->parsed())
      return gnncolor::cli::cmd_gradcheck(gradcheck_opt, std::cout, std::cerr);
    if (baseline->parsed())
      return gnncolor::cli::cmd_baseline(baseline_opt, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gnncolor::cli::kExitError;
  }
  return gnncolor::cli::kExitError;
}
