#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pptqmc/engine.hpp"
#include "pptqmc/run_config.hpp"

namespace pptqmc {

/// Checkpoint file (JSON, format "pptqmc-checkpoint", version 1):
///   config       effective run config
///   config_hash  hex FNV-1a of the result-relevant config fields
///   state        next_index, intervals_done, and per stream the accumulator;
///                reals are C99 hex-float strings so reloads are bit-exact
///   checksum     FNV-1a of the canonical dump of {config, config_hash, state}
struct Checkpoint {
    RunConfig config;
    std::string config_hash;
    RunState state;
};

nlohmann::json accumulator_to_json(const Accumulator& acc);
Accumulator accumulator_from_json(const nlohmann::json& j);

/// Writes atomically (temporary file + rename).
void checkpoint_save(const RunConfig& config, const RunState& state,
                     const std::filesystem::path& path);

/// Throws CheckpointError on unreadable, corrupted, or inconsistent files.
Checkpoint checkpoint_load(const std::filesystem::path& path);

}  // namespace pptqmc
