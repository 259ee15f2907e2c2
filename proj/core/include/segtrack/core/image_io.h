#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "segtrack/core/raster.h"

namespace segtrack {

// Palette-index raster, as stored in multi-object annotation PNGs
// (index 0 = background, index n = object n).
struct IndexImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> indices;
};

// Reads an 8-bit PNG (gray, RGB, RGBA or palette) as RGB, or a JPEG.
// Dispatches on the file extension. Throws DataError with the path on
// failure.
Frame read_frame(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const Frame& frame);

// Reads the raw palette indices of a palette PNG. Gray PNGs are accepted
// with the gray level as the index.
IndexImage read_index_png(const std::filesystem::path& path);

// Writes a palette PNG using the standard 256-entry annotation colormap.
void write_index_png(const std::filesystem::path& path, const IndexImage& img);

// The usual VOC/DAVIS annotation colormap entry for index i.
Rgb annotation_color(int index);

}  // namespace segtrack
