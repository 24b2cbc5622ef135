#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gnncolor/loss.hpp"
#include "gnncolor/model.hpp"
#include "gnncolor/train.hpp"

namespace gnncolor::cli {

// Exit code contract, stable for scripting: 0 = zero conflicts, 1 = positive
// conflicts, 2 = usage or input error.
inline constexpr int kExitSolved = 0;
inline constexpr int kExitConflicts = 1;
inline constexpr int kExitError = 2;

struct CommonOptions {
  ModelConfig model;
  LossConfig loss;
  OptimConfig optim;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
};

struct SolveOptions {
  std::string graph_path;
  int k = 0;
  CommonOptions common;
  std::string out_dir = ".";
  bool write_dot = false;
  bool write_trajectories = false;
  std::string checkpoint_out;  // empty = no checkpoint
};

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err);

struct BenchEntry {
  std::string name;  // file stem under the data dir
  int k = 0;
};

// The ten stock entries with their standard color budgets.
std::vector<BenchEntry> default_bench_entries();

struct BenchOptions {
  std::string data_dir = "data/color";
  std::vector<BenchEntry> entries;  // empty = default_bench_entries()
  CommonOptions common;
  std::string out_dir = "bench-out";
};

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err);

struct AblateOptions {
  std::string graph_path;
  int k = 0;
  double lambda = 0.25;  // the nonzero arm; the other arm runs with lambda = 0
  CommonOptions common;
  std::string out_dir = ".";
};

int cmd_ablate(const AblateOptions& opt, std::ostream& out, std::ostream& err);

struct TaxiOptions {
  std::string timetable_path;
  int taxis = 0;
  CommonOptions common;
  std::string json_out;  // empty = stdout only
};

int cmd_taxi(const TaxiOptions& opt, std::ostream& out, std::ostream& err);

struct GradcheckOptions {
  std::uint64_t seed = 1;
};

int cmd_gradcheck(const GradcheckOptions& opt, std::ostream& out, std::ostream& err);

struct BaselineOptions {
  std::string algorithm;  // "dsatur" | "tabucol"
  std::string graph_path;
  int k = 0;  // tabucol only
  long max_moves = 100000;
  std::uint64_t seed = 1;
  std::string json_out;
};

int cmd_baseline(const BaselineOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace gnncolor::cli
