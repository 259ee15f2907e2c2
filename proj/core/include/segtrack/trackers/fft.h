#pragma once

#include <complex>
#include <vector>

namespace segtrack {

// Dense row-major 2-D array used by the correlation-filter code.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  T& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  const T& at(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  bool same_shape(const Grid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using RealGrid = Grid<double>;
using ComplexGrid = Grid<std::complex<double>>;

// Unnormalized forward 2-D DFT.
ComplexGrid fft2(const RealGrid& in);
ComplexGrid fft2(const ComplexGrid& in);
// Inverse 2-D DFT scaled by 1/N.
ComplexGrid ifft2(const ComplexGrid& in);

// Real part of ifft2(in); `max_imag` receives the largest |imag| residue.
RealGrid ifft2_real(const ComplexGrid& in, double* max_imag = nullptr);

}  // namespace segtrack
