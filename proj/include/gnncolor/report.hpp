#pragma once

#include <iosfwd>

#include "json.hpp"

#include "gnncolor/train.hpp"

namespace gnncolor {

// Bumped whenever an emitted JSON layout changes.
inline constexpr int kReportSchemaVersion = 1;

nlohmann::json assignment_to_json(const Assignment& a);

nlohmann::json model_config_to_json(const ModelConfig& cfg);
nlohmann::json loss_config_to_json(const LossConfig& cfg);
nlohmann::json optim_config_to_json(const OptimConfig& cfg);

// Full configs + seed go into every report so a run is reproducible from the
// JSON alone. Trajectories are bulky and off by default.
nlohmann::json run_report_to_json(const RunReport& r, bool include_trajectories = false);

// CSV rows "iteration,loss,conflicts" at every conflict evaluation point.
void write_trajectory_csv(const RunReport& r, std::ostream& out);

}  // namespace gnncolor
