#pragma once

#include "segtrack/trackers/fft.h"
#include "segtrack/trackers/tracker.h"

namespace segtrack {

// Gaussian kernel between `x` and every cyclic shift of `z`:
//   k[s] = exp(-max(0, |x|^2 + |z|^2 - 2 c[s]) / (sigma^2 * n))
// with c = ifft2(conj(fft2(x)) * fft2(z)), i.e. c[s] = sum_i x[i] z[i+s].
// Throws ParameterError if sigma <= 0, ContractError on a shape mismatch.
RealGrid kernel_correlation(const RealGrid& x, const RealGrid& z, double sigma);

// Hann window, separable.
RealGrid cosine_window(int width, int height);

// Gaussian regression target peaked at zero shift and wrapped around the
// borders.
RealGrid gaussian_target(int width, int height, double sigma);

struct KcfParams {
  double lambda = 1e-4;
  double sigma = 0.5;
  double eta = 0.02;
  double padding = 1.5;
  double out_sigma_factor = 0.1;
  int resolution = 64;

  // Throws ConfigError on out-of-range values.
  void validate() const;
  static KcfParams from(const Params& params);
};

// Dual ridge-regression model of a kernelized correlation filter, on
// already-windowed feature patches of one fixed size.
class KcfModel {
 public:
  KcfModel(int width, int height, const KcfParams& params);

  // alpha_hat = y_hat / (k_hat^{xx} + lambda), then (alpha_hat, x_hat) are
  // blended into the model with rate eta; the first call sets them (eta = 1).
  void train(const RealGrid& patch);

  // Response over all cyclic shifts: ifft2(alpha_hat * fft2(k^{xz})).
  // `max_imag` receives the imaginary residue of the inverse transform.
  RealGrid respond(const RealGrid& patch, double* max_imag = nullptr) const;

  bool trained() const { return trained_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const ComplexGrid& alpha_hat() const { return alpha_hat_; }
  const ComplexGrid& x_hat() const { return x_hat_; }
  const ComplexGrid& y_hat() const { return y_hat_; }
  const KcfParams& params() const { return params_; }

 private:
  // Spectrum of the kernel between the model appearance and `z_hat`.
  ComplexGrid kernel_spectrum(const ComplexGrid& x_hat, const ComplexGrid& z_hat) const;
  void check_shape(const RealGrid& patch) const;

  int width_;
  int height_;
  KcfParams params_;
  ComplexGrid y_hat_;
  ComplexGrid alpha_hat_;
  ComplexGrid x_hat_;
  bool trained_ = false;
};

// Peak of a response map as a cyclic shift wrapped into [-n/2, n/2).
struct Shift {
  int dx = 0;
  int dy = 0;
  double peak = 0.0;
};
Shift response_peak(const RealGrid& response);

// Grayscale KCF. The context window (1 + padding) * box is resampled to a
// fixed square working resolution; only the center moves, the box size
// stays the init size.
class KcfTracker final : public Tracker {
 public:
  explicit KcfTracker(const KcfParams& params = {});

  std::string_view name() const override { return "kcf"; }

  // Shift (in frame pixels) the current model finds on `frame` around the
  // last box, without touching the model.
  struct Displacement {
    double dx = 0.0;
    double dy = 0.0;
  };
  Displacement detect(const Frame& frame) const;

  // Windowed, normalized working-resolution features around `bbox`.
  RealGrid features(const Frame& frame, const BoundingBox& bbox) const;

  const KcfModel& model() const { return model_; }

 protected:
  void do_init(const Frame& frame, const BoundingBox& bbox) override;
  BoundingBox do_update(const Frame& frame) override;

 private:
  KcfParams params_;
  RealGrid window_;
  KcfModel model_;
  std::optional<BoundingBox> box_;
};

}  // namespace segtrack
