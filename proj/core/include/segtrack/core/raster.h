#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace segtrack {

using Rgb = std::array<std::uint8_t, 3>;

// RGB image, row-major, 8 bits per channel.
class Frame {
 public:
  Frame() = default;
  // Fills every pixel with `fill`.
  Frame(int width, int height, Rgb fill = {0, 0, 0});
  // Takes ownership of a W*H*3 byte buffer; throws ContractError otherwise.
  Frame(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0; }

  Rgb at(int x, int y) const {
    const std::size_t i = index(x, y);
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = index(x, y);
    pixels_[i] = c[0];
    pixels_[i + 1] = c[1];
    pixels_[i + 2] = c[2];
  }

  std::span<const std::uint8_t> pixels() const { return pixels_; }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Row-major {0,1} raster.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height);
  // Throws ContractError if the size is wrong or any element is not 0/1.
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t at(int x, int y) const { return bits_[index(x, y)]; }
  void set(int x, int y, bool v) { bits_[index(x, y)] = v ? 1 : 0; }

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::size_t count() const;
  bool any() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Per-pixel target confidence in [0,1].
class ProbMap {
 public:
  ProbMap() = default;
  ProbMap(int width, int height, float fill = 0.0F);
  // Throws ContractError if the size is wrong or a value is outside [0,1]
  // (NaN included).
  ProbMap(int width, int height, std::vector<float> values);

  int width() const { return width_; }
  int height() const { return height_; }

  float at(int x, int y) const { return values_[index(x, y)]; }
  // Values are clamped into [0,1].
  void set(int x, int y, float v);

  std::span<const float> values() const { return values_; }

  friend bool operator==(const ProbMap&, const ProbMap&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

// Converts a {0,1} mask to a confidence map with the same values.
ProbMap to_prob_map(const BinaryMask& mask);

// Luma 0.299R + 0.587G + 0.114B as a W*H row-major buffer in [0,255].
std::vector<double> to_luma(const Frame& frame);

// Bilinear resampling, sample positions aligned on pixel centers.
Frame resize_bilinear(const Frame& src, int width, int height);
ProbMap resize_bilinear(const ProbMap& src, int width, int height);

}  // namespace segtrack
