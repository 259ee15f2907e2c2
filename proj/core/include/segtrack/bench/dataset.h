#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "segtrack/bench/synthetic.h"
#include "segtrack/core/sequence.h"

namespace segtrack {

enum class DatasetKind { Davis, Vot, Synthetic };

std::string_view to_string(DatasetKind kind);
// "davis", "vot" or "synthetic"; throws ConfigError otherwise.
DatasetKind parse_dataset_kind(std::string_view name);

struct DatasetLayout {
  DatasetKind kind = DatasetKind::Synthetic;
  std::filesystem::path root;
  std::string split = "val";
  // Only for kind Synthetic.
  SyntheticSpec synthetic;
  int synthetic_count = 3;
};

// davis: root/ImageSets/<split>.txt lists sequences; frames in
//   root/JPEGImages/<seq>/ (.jpg or .png, sorted by name) and palette
//   annotations in root/Annotations/<seq>/*.png, index = object id, 0 =
//   background, 255 = void (ignored). Objects are the ids present on frame 0.
// vot: root/list.txt lists sequences; frames in root/<seq>/color/, one RLE
//   line per frame in root/<seq>/groundtruth.txt (object id 1).
// Throws DataError naming the offending path.
std::vector<Sequence> load_dataset(const DatasetLayout& layout);

// Writers producing the layouts above (frames as PNG).
void write_davis_dataset(const std::filesystem::path& root, const std::string& split,
                         const std::vector<Sequence>& seqs);
void write_vot_dataset(const std::filesystem::path& root, const std::vector<Sequence>& seqs);

// Image files (.jpg, .jpeg, .png) of a directory sorted by file name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace segtrack
