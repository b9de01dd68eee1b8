#pragma once

#include <json.hpp>

#include "cargen/config.hpp"
#include "cargen/measures.hpp"
#include "cargen/model.hpp"
#include "cargen/pipeline.hpp"

namespace cargen {

/// Config keys and values; unset optional keys are null, infinities are "inf".
nlohmann::ordered_json config_json(const PipelineConfig& config);

/// One model: metrics, stage timings (seconds, two decimals), config snapshot,
/// method identifiers, region sizes and warnings.
nlohmann::ordered_json model_json(const CartilageModel& model, const CartilageMetrics& metrics);

/// {"models": [...]} for a single run.
nlohmann::ordered_json run_report(const CartilageModel& model, const CartilageMetrics& metrics);

/// Both sides (or their failures) plus congruence statistics.
nlohmann::ordered_json joint_report(const JointResult& joint);

}  // namespace cargen
