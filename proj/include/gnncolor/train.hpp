#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnncolor/graph.hpp"
#include "gnncolor/loss.hpp"
#include "gnncolor/model.hpp"

namespace gnncolor {

struct OptimConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-2;  // decoupled; weight matrices only
  long max_iters = 100000;
  long es_window = 1000;   // early stopping window, in iterations
  double es_delta = 1e-3;  // stop when consecutive window means differ less
  int restarts = 5;
  long eval_every = 10;  // conflict evaluation cadence
};

enum class StopReason { kMaxIters, kEarlyStop, kZeroConflicts, kNumericError };

std::string to_string(StopReason r);

struct ConflictSample {
  long iteration = 0;
  int conflicts = 0;
};

// Everything needed to reproduce and inspect one training run.
struct RunReport {
  std::uint64_t seed = 0;
  ModelConfig model_cfg;
  LossConfig loss_cfg;
  OptimConfig optim_cfg;
  std::vector<double> loss_trajectory;  // one entry per iteration
  std::vector<ConflictSample> conflict_trajectory;
  Assignment best_assignment;  // minimum-conflict assignment ever evaluated
  long best_iteration = 0;
  long iterations_run = 0;
  StopReason stop_reason = StopReason::kMaxIters;
  double wall_time_seconds = 0.0;
  double final_loss = 0.0;
  std::string error_message;  // set when stop_reason is kNumericError
  ModelParams final_params;   // parameters at termination, for checkpointing
};

// AdamW with decoupled weight decay applied to the weight matrices only;
// alpha and the node embeddings are excluded from decay.
class AdamW {
 public:
  struct Gradients {
    Tensor w1_self, w1_neigh, w2_self, w2_neigh, h0;
    double alpha = 0.0;
  };

  AdamW(const ModelParams& params, const ModelConfig& mcfg, const OptimConfig& cfg);

  // t is the 1-based step index. Throws NumericError on non-finite gradients.
  void step(ModelParams& params, const Gradients& g, long t);

 private:
  struct Moments {
    Tensor m, v;
  };

  void update(Tensor& theta, const Tensor& grad, Moments& mo, bool decay, long t,
              const char* name);

  OptimConfig cfg_;
  bool train_h0_ = false;
  Moments w1s_, w1n_, w2s_, w2n_, h0_;
  double alpha_m_ = 0.0, alpha_v_ = 0.0;
};

// One seeded optimization run: forward in training mode, loss, backward,
// AdamW step; every eval_every iterations the assignment is extracted in
// inference mode and the best one is kept. Stops on max_iters, a zero-conflict
// evaluation, or when consecutive es_window loss means differ by less than
// es_delta. Numeric failures end the run with a partial report.
RunReport train_once(const Graph& g, int k, ModelConfig mcfg, LossConfig lcfg,
                     OptimConfig ocfg, std::uint64_t seed);

struct MultiResult {
  int best_index = 0;
  std::vector<RunReport> reports;

  const RunReport& best() const { return reports[best_index]; }
};

// All runs failed numerically; partial reports attached.
struct TrainingFailure : std::runtime_error {
  explicit TrainingFailure(std::vector<RunReport> r)
      : std::runtime_error("all restarts failed"), reports(std::move(r)) {}
  std::vector<RunReport> reports;
};

// cfg.restarts independent runs seeded first_seed .. first_seed+R-1, executed
// concurrently. Best = lexicographic minimum of (conflicts, final loss, seed
// index), which makes the selection deterministic.
MultiResult train_multi(const Graph& g, int k, ModelConfig mcfg, LossConfig lcfg,
                        OptimConfig ocfg, std::uint64_t first_seed, int max_threads = 0);

}  // namespace gnncolor
