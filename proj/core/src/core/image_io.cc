#include "segtrack/core/image_io.h"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include "segtrack/error.h"

namespace segtrack {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw DataError("cannot open " + path.string());
  return f;
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// libpng reports errors through longjmp; everything below keeps only POD
// state live across setjmp.
struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

struct RawPng {
  int width = 0;
  int height = 0;
  int channels = 0;
  bool palette = false;
  std::vector<std::uint8_t> data;
};

RawPng read_png_raw(const std::filesystem::path& path, bool expand_palette) {
  FilePtr f = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw DataError(path.string() + ": not a PNG file");
  }
  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  r.info = png_create_info_struct(r.png);
  if (r.png == nullptr || r.info == nullptr) {
    throw DataError(path.string() + ": libpng init failed");
  }
  RawPng out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(r.png))) {
    throw DataError(path.string() + ": corrupt PNG");
  }
  png_init_io(r.png, f.get());
  png_set_sig_bytes(r.png, 8);
  png_read_info(r.png, r.info);
  const png_byte color = png_get_color_type(r.png, r.info);
  const png_byte depth = png_get_bit_depth(r.png, r.info);
  if (depth == 16) png_set_strip_16(r.png);
  if (depth < 8) png_set_packing(r.png);
  out.palette = color == PNG_COLOR_TYPE_PALETTE;
  if (out.palette && expand_palette) {
    png_set_palette_to_rgb(r.png);
    out.palette = false;
  }
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8 && expand_palette) {
    png_set_expand_gray_1_2_4_to_8(r.png);
  }
  png_read_update_info(r.png, r.info);
  out.width = static_cast<int>(png_get_image_width(r.png, r.info));
  out.height = static_cast<int>(png_get_image_height(r.png, r.info));
  out.channels = png_get_channels(r.png, r.info);
  const std::size_t stride = png_get_rowbytes(r.png, r.info);
  out.data.resize(stride * static_cast<std::size_t>(out.height));
  rows.resize(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) rows[y] = out.data.data() + stride * y;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return out;
}

Frame read_png_frame(const std::filesystem::path& path) {
  RawPng raw = read_png_raw(path, true);
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(raw.width) * raw.height * 3);
  const std::size_t n = static_cast<std::size_t>(raw.width) * raw.height;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = raw.data.data() + i * raw.channels;
    if (raw.channels >= 3) {
      rgb[3 * i] = p[0];
      rgb[3 * i + 1] = p[1];
      rgb[3 * i + 2] = p[2];
    } else {
      rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = p[0];
    }
  }
  return Frame(raw.width, raw.height, std::move(rgb));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  std::longjmp(err->jump, 1);
}

Frame read_jpeg_frame(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  std::vector<std::uint8_t> rgb;
  int width = 0;
  int height = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw DataError(path.string() + ": corrupt JPEG");
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, f.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  rgb.resize(static_cast<std::size_t>(width) * height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return Frame(width, height, std::move(rgb));
}

void write_png_impl(const std::filesystem::path& path, int width, int height,
                    const std::uint8_t* data, int channels, bool palette) {
  FilePtr f = open_file(path, "wb");
  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  w.info = png_create_info_struct(w.png);
  if (w.png == nullptr || w.info == nullptr) {
    throw DataError(path.string() + ": libpng init failed");
  }
  std::vector<png_color> colors;
  if (palette) {
    colors.resize(256);
    for (int i = 0; i < 256; ++i) {
      const Rgb c = annotation_color(i);
      colors[i] = png_color{c[0], c[1], c[2]};
    }
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  if (setjmp(png_jmpbuf(w.png))) {
    throw DataError(path.string() + ": PNG write failed");
  }
  png_init_io(w.png, f.get());
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8,
               palette ? PNG_COLOR_TYPE_PALETTE : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (palette) png_set_PLTE(w.png, w.info, colors.data(), 256);
  png_write_info(w.png, w.info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(data + stride * y);
  }
  png_write_image(w.png, rows.data());
  png_write_end(w.png, nullptr);
}

}  // namespace

Frame read_frame(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png_frame(path);
  if (ext == ".jpg" || ext == ".jpeg") return read_jpeg_frame(path);
  throw DataError(path.string() + ": unsupported image format");
}

void write_png(const std::filesystem::path& path, const Frame& frame) {
  write_png_impl(path, frame.width(), frame.height(), frame.pixels().data(), 3,
                 false);
}

IndexImage read_index_png(const std::filesystem::path& path) {
  RawPng raw = read_png_raw(path, false);
  if (!raw.palette && raw.channels != 1) {
    throw DataError(path.string() +
                    ": annotation PNG must be palette or grayscale");
  }
  return IndexImage{raw.width, raw.height, std::move(raw.data)};
}

void write_index_png(const std::filesystem::path& path, const IndexImage& img) {
  if (img.indices.size() != static_cast<std::size_t>(img.width) * img.height) {
    throw ContractError("write_index_png: buffer size mismatch");
  }
  write_png_impl(path, img.width, img.height, img.indices.data(), 1, true);
}

Rgb annotation_color(int index) {
  Rgb c{0, 0, 0};
  int id = index;
  for (int shift = 7; shift >= 0 && id > 0; --shift) {
    c[0] |= static_cast<std::uint8_t>(((id >> 0) & 1) << shift);
    c[1] |= static_cast<std::uint8_t>(((id >> 1) & 1) << shift);
    c[2] |= static_cast<std::uint8_t>(((id >> 2) & 1) << shift);
    id >>= 3;
  }
  return c;
}

}  // namespace segtrack
