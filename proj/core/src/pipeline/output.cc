#include "segtrack/pipeline/output.h"

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "segtrack/core/image_io.h"

namespace segtrack {

std::string frame_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%05zu", index);
  return buf;
}

std::string run_manifest_json(const RunRecord& record) {
  nlohmann::ordered_json j;
  j["sequence"] = record.sequence;
  j["object_id"] = record.object_id;
  j["tracker"] = record.tracker;
  j["segmenter"] = record.segmenter;
  j["config"] = {{"k", record.config.k},
                 {"tau", record.config.tau},
                 {"record_timings", record.config.record_timings}};
  auto frames = nlohmann::ordered_json::array();
  for (const FrameRecord& f : record.frames) {
    nlohmann::ordered_json e;
    e["index"] = f.index;
    e["bbox"] = {f.bbox.cx(), f.bbox.cy(), f.bbox.w(), f.bbox.h()};
    e["mask_area"] = f.mask.count();
    if (record.config.record_timings) {
      e["t_track"] = f.t_track;
      e["t_segment"] = f.t_segment;
    }
    frames.push_back(std::move(e));
  }
  j["frames"] = std::move(frames);
  return j.dump(2) + "\n";
}

void write_run_manifest(const std::filesystem::path& path, const RunRecord& record) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << run_manifest_json(record);
  if (!out) throw DataError("cannot write run manifest " + path.string());
}

void write_mask_pngs(const std::filesystem::path& dir,
                     const std::vector<std::map<ObjectId, BinaryMask>>& masks,
                     std::size_t first_index) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (masks[i].empty()) continue;
    const BinaryMask& any = masks[i].begin()->second;
    IndexImage img{any.width(), any.height(),
                   std::vector<std::uint8_t>(static_cast<std::size_t>(any.width()) *
                                             any.height())};
    for (const auto& [id, m] : masks[i]) {
      if (id < 1 || id > 255) throw ContractError("mask png: object id outside 1..255");
      const auto bits = m.bits();
      for (std::size_t p = 0; p < bits.size(); ++p) {
        if (bits[p]) img.indices[p] = static_cast<std::uint8_t>(id);
      }
    }
    write_index_png(dir / (frame_stem(first_index + i) + ".png"), img);
  }
}

}  // namespace segtrack
