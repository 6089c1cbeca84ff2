#include "vidctx/config.hpp"

#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "vidctx/errors.hpp"

namespace vidctx {

RunConfig parse_run_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw InvalidArgument(std::string("config parse error: ") + e.what());
    }
    RunConfig config;
    jsonio::pipeline_config_from_json(j, &config.pipeline);
    if (config.pipeline.captions_only && !j.contains("context_strategy")) {
        config.pipeline.context_strategy = ContextStrategy::ConcatCaptions;
    }
    if (j.contains("dataset")) {
        DatasetDescriptor desc;
        jsonio::dataset_from_json(j.at("dataset"), &desc);
        config.dataset = std::move(desc);
    }
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StorageError("config file not found: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_run_config(buffer.str());
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(path.string() + ": " + e.what());
    }
}

std::string run_config_to_json(const PipelineConfig& config, int indent) {
    return jsonio::pipeline_config_to_json(config).dump(indent);
}

std::string dataset_to_json(const DatasetDescriptor& desc, int indent) {
    return jsonio::dataset_to_json(desc).dump(indent);
}

}  // namespace vidctx
