#include "gnncolor/train.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "gnncolor/errors.hpp"

namespace gnncolor {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::kMaxIters: return "max_iters";
    case StopReason::kEarlyStop: return "early_stop";
    case StopReason::kZeroConflicts: return "zero_conflicts";
    case StopReason::kNumericError: return "numeric_error";
  }
  return "max_iters";
}

AdamW::AdamW(const ModelParams& params, const ModelConfig& mcfg, const OptimConfig& cfg)
    : cfg_(cfg), train_h0_(mcfg.train_embeddings) {
  auto zeros_like = [](const Tensor& t) {
    return Moments{Tensor(t.rows, t.cols), Tensor(t.rows, t.cols)};
  };
  w1s_ = zeros_like(params.w1_self);
  w1n_ = zeros_like(params.w1_neigh);
  w2s_ = zeros_like(params.w2_self);
  w2n_ = zeros_like(params.w2_neigh);
  if (train_h0_) h0_ = zeros_like(params.h0);
}

void AdamW::update(Tensor& theta, const Tensor& grad, Moments& mo, bool decay, long t,
                   const char* name) {
  if (!grad.same_shape(theta)) throw ShapeError(std::string("adamw: gradient shape for ") + name);
  if (!grad.all_finite()) throw NumericError(std::string("adamw: non-finite gradient for ") + name);
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t));
  const double wd = decay ? cfg_.weight_decay : 0.0;
  for (long i = 0; i < theta.size(); ++i) {
    const double g = grad.data[i];
    double& m = mo.m.data[i];
    double& v = mo.v.data[i];
    m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
    v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g * g;
    const double mhat = m / bc1;
    const double vhat = v / bc2;
    theta.data[i] -= cfg_.lr * (mhat / (std::sqrt(vhat) + cfg_.eps) + wd * theta.data[i]);
  }
}

void AdamW::step(ModelParams& params, const Gradients& g, long t) {
  if (t < 1) throw std::invalid_argument("adamw: step index must be >= 1");
  update(params.w1_self, g.w1_self, w1s_, true, t, "w1_self");
  update(params.w1_neigh, g.w1_neigh, w1n_, true, t, "w1_neigh");
  update(params.w2_self, g.w2_self, w2s_, true, t, "w2_self");
  update(params.w2_neigh, g.w2_neigh, w2n_, true, t, "w2_neigh");

  if (!std::isfinite(g.alpha)) throw NumericError("adamw: non-finite gradient for alpha");
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t));
  alpha_m_ = cfg_.beta1 * alpha_m_ + (1.0 - cfg_.beta1) * g.alpha;
  alpha_v_ = cfg_.beta2 * alpha_v_ + (1.0 - cfg_.beta2) * g.alpha * g.alpha;
  params.alpha -= cfg_.lr * (alpha_m_ / bc1) / (std::sqrt(alpha_v_ / bc2) + cfg_.eps);

  if (train_h0_) update(params.h0, g.h0, h0_, false, t, "h0");
}

namespace {

void validate_optim(const OptimConfig& cfg) {
  if (cfg.lr <= 0.0) throw std::invalid_argument("lr must be > 0");
  if (cfg.beta1 < 0.0 || cfg.beta1 >= 1.0 || cfg.beta2 < 0.0 || cfg.beta2 >= 1.0)
    throw std::invalid_argument("betas must be in [0,1)");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (cfg.es_window < 1) throw std::invalid_argument("es_window must be >= 1");
  if (cfg.eval_every < 1) throw std::invalid_argument("eval_every must be >= 1");
}

AdamW::Gradients collect_gradients(Tape& tape, const ForwardNodes& f, const ModelConfig& cfg) {
  AdamW::Gradients g;
  g.w1_self = tape.grad(f.w1_self);
  g.w1_neigh = tape.grad(f.w1_neigh);
  g.w2_self = tape.grad(f.w2_self);
  g.w2_neigh = tape.grad(f.w2_neigh);
  g.alpha = tape.grad(f.alpha).scalar_value();
  if (cfg.train_embeddings) g.h0 = tape.grad(f.h0);
  return g;
}

}  // namespace

RunReport train_once(const Graph& g, int k, ModelConfig mcfg, LossConfig lcfg,
                     OptimConfig ocfg, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("color count must be >= 1");
  validate_optim(ocfg);
  mcfg.k = k;
  mcfg.seed = seed;

  RunReport rep;
  rep.seed = seed;
  rep.model_cfg = mcfg;
  rep.loss_cfg = lcfg;
  rep.optim_cfg = ocfg;
  rep.best_assignment.k = k;
  rep.best_assignment.conflicts = std::numeric_limits<int>::max();

  const auto t_start = std::chrono::steady_clock::now();
  Rng rng(seed);
  const AggregationPlan plan(g);
  ModelParams params = init_params(g, mcfg, rng);
  AdamW opt(params, mcfg, ocfg);
  Tape tape;

  long last_eval_iter = 0;
  auto evaluate = [&](long iter) {
    const Tensor p = eval_probabilities(plan, params, mcfg);
    Assignment a = extract_assignment(g, p);
    rep.conflict_trajectory.push_back({iter, a.conflicts});
    if (a.conflicts < rep.best_assignment.conflicts) {
      rep.best_assignment = std::move(a);
      rep.best_iteration = iter;
    }
    last_eval_iter = iter;
    return rep.best_assignment.conflicts;
  };

  StopReason reason = StopReason::kMaxIters;
  double prev_window_mean = 0.0;
  bool have_prev_window = false;

  try {
    for (long t = 1; t <= ocfg.max_iters; ++t) {
      tape.clear();
      const ForwardNodes f = forward(tape, plan, params, mcfg, /*training=*/true, rng);
      const NodeId loss_node = total_loss(tape, g, f.probabilities, lcfg);
      rep.loss_trajectory.push_back(tape.value(loss_node).scalar_value());
      tape.backward(loss_node);
      const AdamW::Gradients grads = collect_gradients(tape, f, mcfg);
      opt.step(params, grads, t);

      if (t % ocfg.eval_every == 0 || t == ocfg.max_iters) {
        if (evaluate(t) == 0) {
          reason = StopReason::kZeroConflicts;
          break;
        }
      }

      if (t % ocfg.es_window == 0) {
        double mean = 0.0;
        for (long i = t - ocfg.es_window; i < t; ++i) mean += rep.loss_trajectory[i];
        mean /= static_cast<double>(ocfg.es_window);
        if (have_prev_window && std::abs(mean - prev_window_mean) < ocfg.es_delta) {
          if (last_eval_iter != t) evaluate(t);
          reason = StopReason::kEarlyStop;
          break;
        }
        prev_window_mean = mean;
        have_prev_window = true;
      }
    }
    // a run shorter than eval_every still needs one evaluation
    if (rep.conflict_trajectory.empty()) evaluate(static_cast<long>(rep.loss_trajectory.size()));
  } catch (const NumericError& e) {
    reason = StopReason::kNumericError;
    rep.error_message = e.what();
    if (rep.conflict_trajectory.empty()) {
      try {
        evaluate(static_cast<long>(rep.loss_trajectory.size()));
      } catch (const NumericError&) {
        // parameters already broken; leave the sentinel assignment
      }
    }
  }

  rep.iterations_run = static_cast<long>(rep.loss_trajectory.size());
  rep.stop_reason = reason;
  rep.final_params = std::move(params);
  rep.final_loss = rep.loss_trajectory.empty()
                       ? std::numeric_limits<double>::quiet_NaN()
                       : rep.loss_trajectory.back();
  rep.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

MultiResult train_multi(const Graph& g, int k, ModelConfig mcfg, LossConfig lcfg,
                        OptimConfig ocfg, std::uint64_t first_seed, int max_threads) {
  if (ocfg.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  const int runs = ocfg.restarts;

  MultiResult result;
  result.reports.resize(runs);

  int threads = max_threads > 0 ? max_threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = std::min(threads, runs);

  if (threads == 1) {
    for (int i = 0; i < runs; ++i)
      result.reports[i] = train_once(g, k, mcfg, lcfg, ocfg, first_seed + i);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int i = next.fetch_add(1); i < runs; i = next.fetch_add(1))
        result.reports[i] = train_once(g, k, mcfg, lcfg, ocfg, first_seed + i);
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  bool any_ok = false;
  auto key = [](const RunReport& r) {
    const double loss = std::isfinite(r.final_loss)
                            ? r.final_loss
                            : std::numeric_limits<double>::infinity();
    return std::make_pair(r.best_assignment.conflicts, loss);
  };
  for (int i = 0; i < runs; ++i) {
    if (result.reports[i].stop_reason != StopReason::kNumericError) any_ok = true;
    if (key(result.reports[i]) < key(result.reports[result.best_index]))
      result.best_index = i;
  }
  if (!any_ok) throw TrainingFailure(std::move(result.reports));
  return result;
}

}  // namespace gnncolor
