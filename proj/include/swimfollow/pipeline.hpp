#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "swimfollow/config.hpp"

namespace swimfollow {

/// Artifacts of one pipeline stage, as paths relative to the run directory.
struct StageRecord {
    std::string name;                   // "bc", "dagger-1", ...
    std::vector<std::string> rollouts;  // per-rollout log CSVs, episode order
    std::string checkpoint;
    std::string history;                // per-epoch train/val loss CSV
};

/// Record of a run directory; enough to resume or evaluate it later.
struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string created;
    std::string updated;
    SimConfig config;
    std::vector<StageRecord> stages;
    std::map<std::string, std::string> checksums;  // rel path -> fnv1a64 hex

    const StageRecord* find_stage(const std::string& name) const;
    std::size_t dagger_stages() const;
};

void save_manifest(const std::filesystem::path& run_dir, const RunManifest& manifest);

/// Reads manifest.json and verifies every referenced artifact exists and
/// matches its recorded checksum.
RunManifest load_manifest(const std::filesystem::path& run_dir);

/// Rebuilds the training dataset from the manifest's rollout logs, stage
/// order, exact to the bit (logs round-trip doubles).
Dataset dataset_from_manifest(const std::filesystem::path& run_dir,
                              const RunManifest& manifest);

/// Collects BC demonstrations, trains policy zero, writes rollout logs,
/// checkpoint, history and a fresh manifest.
RunManifest cmd_bc(const SimConfig& cfg, const std::filesystem::path& run_dir);

/// Runs the remaining DAgger iterations on top of the run's manifest,
/// retraining on the growing aggregate after each collection.
RunManifest cmd_dagger(const SimConfig& cfg, const std::filesystem::path& run_dir);

/// Paired evaluation of the named policies ("expert", "none", a stage name,
/// or a checkpoint path). Writes metrics tables and SVG plots.
std::vector<EvalResult> cmd_eval(const SimConfig& cfg, const std::filesystem::path& run_dir,
                                 std::vector<std::string> policies);

/// Fixed-follower pressure study: grid CSVs and SVG plots under out_dir.
FixedFollowerResult cmd_fixed_follower(const SimConfig& cfg,
                                       const std::filesystem::path& out_dir);

} // namespace swimfollow
