#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "vidctx/datasets.hpp"
#include "vidctx/pipeline.hpp"

namespace vidctx {

// Root of a config file: the pipeline settings plus an optional dataset section.
struct RunConfig {
    PipelineConfig pipeline;
    std::optional<DatasetDescriptor> dataset;
};

// Parses a JSON config document mirroring the PipelineConfig field names.
// Throws StorageError when the file cannot be read, InvalidArgument on bad values.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& json_text);

// Serialized snapshot of the effective configuration, as embedded in manifests.
std::string run_config_to_json(const PipelineConfig& config, int indent = -1);
std::string dataset_to_json(const DatasetDescriptor& desc, int indent = -1);

}  // namespace vidctx
