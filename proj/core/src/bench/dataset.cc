#include "segtrack/bench/dataset.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "segtrack/bench/rle.h"
#include "segtrack/core/image_io.h"
#include "segtrack/error.h"
#include "segtrack/pipeline/output.h"

namespace segtrack {
namespace fs = std::filesystem;

namespace {

constexpr std::uint8_t kVoid = 255;

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<Frame> read_frames(const fs::path& dir) {
  const auto files = list_images(dir);
  if (files.empty()) throw DataError("no frames in " + dir.string());
  std::vector<Frame> frames;
  frames.reserve(files.size());
  for (const auto& f : files) frames.push_back(read_frame(f));
  return frames;
}

Sequence load_davis_sequence(const fs::path& root, const std::string& name) {
  std::vector<Frame> frames = read_frames(root / "JPEGImages" / name);
  const fs::path ann_dir = root / "Annotations" / name;
  std::vector<fs::path> ann;
  for (const auto& p : list_images(ann_dir)) {
    if (p.extension() == ".png") ann.push_back(p);
  }
  if (ann.size() != frames.size()) {
    throw DataError("sequence '" + name + "': " + std::to_string(frames.size()) +
                    " frames but " + std::to_string(ann.size()) + " annotations in " +
                    ann_dir.string());
  }
  std::map<ObjectId, std::vector<BinaryMask>> gt;
  std::set<int> ids;
  for (std::size_t t = 0; t < ann.size(); ++t) {
    const IndexImage img = read_index_png(ann[t]);
    if (img.width != frames[t].width() || img.height != frames[t].height()) {
      throw DataError(ann[t].string() + ": annotation size differs from its frame");
    }
    if (t == 0) {
      for (std::uint8_t v : img.indices) {
        if (v != 0 && v != kVoid) ids.insert(v);
      }
      if (ids.empty()) throw DataError(ann[t].string() + ": no object on the first frame");
      for (int id : ids) gt[id].reserve(ann.size());
    }
    for (std::uint8_t v : img.indices) {
      if (v != 0 && v != kVoid && ids.count(v) == 0) {
        throw DataError(ann[t].string() + ": object id " + std::to_string(v) +
                        " does not appear on the first frame");
      }
    }
    for (int id : ids) {
      std::vector<std::uint8_t> bits(img.indices.size());
      for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = img.indices[i] == id ? 1 : 0;
      gt[id].emplace_back(img.width, img.height, std::move(bits));
    }
  }
  try {
    return Sequence(name, std::move(frames), std::move(gt));
  } catch (const DataError& e) {
    throw DataError("sequence '" + name + "': " + e.what());
  }
}

Sequence load_vot_sequence(const fs::path& root, const std::string& name) {
  std::vector<Frame> frames = read_frames(root / name / "color");
  const fs::path gt_path = root / name / "groundtruth.txt";
  const auto lines = read_lines(gt_path);
  if (lines.size() != frames.size()) {
    throw DataError("sequence '" + name + "': " + std::to_string(frames.size()) +
                    " frames but " + std::to_string(lines.size()) + " lines in " +
                    gt_path.string());
  }
  std::vector<BinaryMask> masks;
  masks.reserve(lines.size());
  for (std::size_t t = 0; t < lines.size(); ++t) {
    try {
      masks.push_back(rle_decode(lines[t], frames[t].width(), frames[t].height()));
    } catch (const RleError& e) {
      throw RleError(gt_path.string() + " line " + std::to_string(t + 1) + ": " + e.what());
    }
  }
  std::map<ObjectId, std::vector<BinaryMask>> gt;
  gt.emplace(1, std::move(masks));
  try {
    return Sequence(name, std::move(frames), std::move(gt));
  } catch (const DataError& e) {
    throw DataError("sequence '" + name + "': " + e.what());
  }
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw DataError("cannot write " + path.string());
}

}  // namespace

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::Davis:
      return "davis";
    case DatasetKind::Vot:
      return "vot";
    case DatasetKind::Synthetic:
      break;
  }
  return "synthetic";
}

DatasetKind parse_dataset_kind(std::string_view name) {
  if (name == "davis") return DatasetKind::Davis;
  if (name == "vot") return DatasetKind::Vot;
  if (name == "synthetic") return DatasetKind::Synthetic;
  throw ConfigError("unknown dataset kind '" + std::string(name) +
                    "' (expected davis, vot or synthetic)");
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("missing directory " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".jpg" || ext == ".jpeg" || ext == ".png") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Sequence> load_dataset(const DatasetLayout& layout) {
  if (layout.kind == DatasetKind::Synthetic) {
    return gen_synthetic_set(layout.synthetic, layout.synthetic_count);
  }
  if (!fs::is_directory(layout.root)) {
    throw DataError("dataset root " + layout.root.string() + " does not exist");
  }
  std::vector<Sequence> out;
  if (layout.kind == DatasetKind::Davis) {
    for (const auto& name : read_lines(layout.root / "ImageSets" / (layout.split + ".txt"))) {
      out.push_back(load_davis_sequence(layout.root, name));
    }
  } else {
    for (const auto& name : read_lines(layout.root / "list.txt")) {
      out.push_back(load_vot_sequence(layout.root, name));
    }
  }
  if (out.empty()) throw DataError("dataset " + layout.root.string() + " lists no sequences");
  return out;
}

void write_davis_dataset(const fs::path& root, const std::string& split,
                         const std::vector<Sequence>& seqs) {
  fs::create_directories(root / "ImageSets");
  std::vector<std::string> names;
  for (const Sequence& s : seqs) {
    names.push_back(s.name());
    const fs::path img_dir = root / "JPEGImages" / s.name();
    const fs::path ann_dir = root / "Annotations" / s.name();
    fs::create_directories(img_dir);
    fs::create_directories(ann_dir);
    for (std::size_t t = 0; t < s.size(); ++t) {
      write_png(img_dir / (frame_stem(t) + ".png"), s.frame(t));
      IndexImage img{s.width(), s.height(),
                     std::vector<std::uint8_t>(static_cast<std::size_t>(s.width()) * s.height())};
      for (ObjectId id : s.object_ids()) {
        if (id < 1 || id >= kVoid) throw ContractError("davis writer: object id outside 1..254");
        const auto bits = s.gt_masks(id)[t].bits();
        for (std::size_t i = 0; i < bits.size(); ++i) {
          if (bits[i]) img.indices[i] = static_cast<std::uint8_t>(id);
        }
      }
      write_index_png(ann_dir / (frame_stem(t) + ".png"), img);
    }
  }
  write_lines(root / "ImageSets" / (split + ".txt"), names);
}

void write_vot_dataset(const fs::path& root, const std::vector<Sequence>& seqs) {
  fs::create_directories(root);
  std::vector<std::string> names;
  for (const Sequence& s : seqs) {
    const auto ids = s.object_ids();
    if (ids.size() != 1) throw ContractError("vot writer: one object per sequence");
    names.push_back(s.name());
    const fs::path dir = root / s.name();
    fs::create_directories(dir / "color");
    std::vector<std::string> lines;
    for (std::size_t t = 0; t < s.size(); ++t) {
      char stem[16];
      std::snprintf(stem, sizeof stem, "%08zu", t + 1);
      write_png(dir / "color" / (std::string(stem) + ".png"), s.frame(t));
      lines.push_back(rle_encode(s.gt_masks(ids[0])[t]));
    }
    write_lines(dir / "groundtruth.txt", lines);
  }
  write_lines(root / "list.txt", names);
}

}  // namespace segtrack
