#include "segtrack/trackers/fft.h"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "segtrack/error.h"

namespace segtrack {
namespace {

// FFTW's planner is not thread-safe; executing an existing plan on new
// arrays is. Plans are created once per (size, direction) and kept for the
// life of the process.
class PlanCache {
 public:
  fftw_plan get(int width, int height, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(width, height, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    const std::size_t n = static_cast<std::size_t>(width) * height;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_2d(height, width, in, out, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw Error("fftw: plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

ComplexGrid transform(const ComplexGrid& in, int sign) {
  if (in.width() < 1 || in.height() < 1) {
    throw ContractError("fft: empty grid");
  }
  ComplexGrid out(in.width(), in.height());
  ComplexGrid scratch = in;  // fftw_execute_dft takes a non-const input.
  fftw_execute_dft(cache().get(in.width(), in.height(), sign),
                   reinterpret_cast<fftw_complex*>(scratch.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

ComplexGrid fft2(const ComplexGrid& in) { return transform(in, FFTW_FORWARD); }

ComplexGrid fft2(const RealGrid& in) {
  ComplexGrid c(in.width(), in.height());
  for (std::size_t i = 0; i < in.size(); ++i) c[i] = in[i];
  return fft2(c);
}

ComplexGrid ifft2(const ComplexGrid& in) {
  ComplexGrid out = transform(in, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(in.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= scale;
  return out;
}

RealGrid ifft2_real(const ComplexGrid& in, double* max_imag) {
  const ComplexGrid c = ifft2(in);
  RealGrid out(c.width(), c.height());
  double residue = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i] = c[i].real();
    residue = std::max(residue, std::abs(c[i].imag()));
  }
  if (max_imag != nullptr) *max_imag = residue;
  return out;
}

}  // namespace segtrack
