#pragma once

// Internal JSON (de)serialization for domain types. Not installed; the public
// headers stay free of the JSON dependency.

#include <json.hpp>

#include "vidctx/aggregate.hpp"
#include "vidctx/backend.hpp"
#include "vidctx/datasets.hpp"
#include "vidctx/pipeline.hpp"
#include "vidctx/scores.hpp"
#include "vidctx/types.hpp"

namespace vidctx::jsonio {

using ordered_json = nlohmann::ordered_json;

ordered_json letter_map_to_json(const std::map<char, double>& map);
std::map<char, double> letter_map_from_json(const nlohmann::json& j);

ordered_json token_scores_to_json(const TokenScoreMap& map);
TokenScoreMap token_scores_from_json(const nlohmann::json& j);

ordered_json caption_record_to_json(const CaptionRecord& record);
CaptionRecord caption_record_from_json(const nlohmann::json& j);

ordered_json decision_to_json(const VideoDecision& decision);

ordered_json pipeline_config_to_json(const PipelineConfig& config);
void pipeline_config_from_json(const nlohmann::json& j, PipelineConfig* config);

ordered_json dataset_to_json(const DatasetDescriptor& desc);
void dataset_from_json(const nlohmann::json& j, DatasetDescriptor* desc);

ordered_json report_to_json(const ScoreReport& report);

}  // namespace vidctx::jsonio
