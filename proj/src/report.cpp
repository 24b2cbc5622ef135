#include "gnncolor/report.hpp"

#include <ostream>

namespace gnncolor {

using nlohmann::json;

json assignment_to_json(const Assignment& a) {
  return json{{"k", a.k},
              {"conflicts", a.conflicts},
              {"colors_used", colors_used(a)},
              {"colors", a.colors}};
}

json model_config_to_json(const ModelConfig& cfg) {
  return json{{"d0", cfg.d0},
              {"d1", cfg.d1},
              {"k", cfg.k},
              {"dropout_p", cfg.dropout_p},
              {"activation", to_string(cfg.activation)},
              {"leaky_slope", cfg.leaky_slope},
              {"train_embeddings", cfg.train_embeddings},
              {"seed", cfg.seed}};
}

json loss_config_to_json(const LossConfig& cfg) {
  return json{{"lambda", cfg.lambda},
              {"conv_sign", to_string(cfg.conv_sign)},
              {"eps", cfg.eps}};
}

json optim_config_to_json(const OptimConfig& cfg) {
  return json{{"lr", cfg.lr},
              {"beta1", cfg.beta1},
              {"beta2", cfg.beta2},
              {"eps", cfg.eps},
              {"weight_decay", cfg.weight_decay},
              {"max_iters", cfg.max_iters},
              {"es_window", cfg.es_window},
              {"es_delta", cfg.es_delta},
              {"restarts", cfg.restarts},
              {"eval_every", cfg.eval_every}};
}

json run_report_to_json(const RunReport& r, bool include_trajectories) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["seed"] = r.seed;
  j["model"] = model_config_to_json(r.model_cfg);
  j["loss"] = loss_config_to_json(r.loss_cfg);
  j["optim"] = optim_config_to_json(r.optim_cfg);
  j["iterations_run"] = r.iterations_run;
  j["stop_reason"] = to_string(r.stop_reason);
  j["wall_time_seconds"] = r.wall_time_seconds;
  j["final_loss"] = r.final_loss;
  j["best_iteration"] = r.best_iteration;
  j["best"] = assignment_to_json(r.best_assignment);
  if (!r.error_message.empty()) j["error"] = r.error_message;
  if (include_trajectories) {
    j["loss_trajectory"] = r.loss_trajectory;
    json samples = json::array();
    for (const auto& s : r.conflict_trajectory)
      samples.push_back({{"iteration", s.iteration}, {"conflicts", s.conflicts}});
    j["conflict_trajectory"] = samples;
  }
  return j;
}

void write_trajectory_csv(const RunReport& r, std::ostream& out) {
  out << "iteration,loss,conflicts\n";
  for (const auto& s : r.conflict_trajectory) {
    const double loss = (s.iteration >= 1 &&
                         s.iteration <= static_cast<long>(r.loss_trajectory.size()))
                            ? r.loss_trajectory[s.iteration - 1]
                            : 0.0;
    out << s.iteration << ',' << loss << ',' << s.conflicts << '\n';
  }
}

}  // namespace gnncolor
