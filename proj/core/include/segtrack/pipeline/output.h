#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "segtrack/pipeline/pipeline.h"

namespace segtrack {

// Run manifest: sequence, object, components, pipeline config and one entry
// per frame with its box (and timings when recorded). Deterministic for
// untimed runs.
std::string run_manifest_json(const RunRecord& record);
void write_run_manifest(const std::filesystem::path& path, const RunRecord& record);

// Writes one indexed PNG per frame (NNNNN.png, index = object id). `masks`
// holds, per frame, disjoint per-object masks such as fuse_multiobject
// returns; `first_index` names the first file.
void write_mask_pngs(const std::filesystem::path& dir,
                     const std::vector<std::map<ObjectId, BinaryMask>>& masks,
                     std::size_t first_index);

// Zero-padded five-digit frame file stem.
std::string frame_stem(std::size_t index);

}  // namespace segtrack
