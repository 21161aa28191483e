#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dencomb {

/// Grayscale image, rows = height, cols = width, row-major storage.
/// Intensities live on [0, 1]; noisy images may leave that range.
template <typename Scalar>
using ImageX = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Image = ImageX<double>;

/// Additive i.i.d. Gaussian noise. `sigma255` is on the [0, 255] scale.
struct NoiseModel {
  double sigma255 = 25.0;
  bool clipped = false;
  std::uint64_t seed = 0;

  double sigma() const { return sigma255 / 255.0; }
};

/// The K denoiser outputs for one noisy observation.
struct EstimateSet {
  std::vector<Image> estimates;
  std::vector<std::string> labels;
  Image source_noisy;

  EstimateSet() = default;
  /// Validates K >= 1, matching shapes and unique labels.
  EstimateSet(std::vector<Image> estimates, std::vector<std::string> labels, Image source_noisy);

  int size() const { return static_cast<int>(estimates.size()); }
  Eigen::Index rows() const { return source_noisy.rows(); }
  Eigen::Index cols() const { return source_noisy.cols(); }
};

/// y = z + eta with eta ~ N(0, sigma^2); clamped to [0, 1] when `model.clipped`.
Image add_noise(const Image& clean, const NoiseModel& model);

/// Pixel-wise sum_k w_k zhat_k. No clamping.
Image combine_estimates(const EstimateSet& set, const Eigen::Ref<const Eigen::VectorXd>& w);

/// Per-pixel mean squared difference ||a - b||^2 / N.
double mse_between(const Image& a, const Image& b);

/// Matrix of per-pixel mean squared distances between every pair of estimates.
Eigen::MatrixXd pairwise_sq_dist(const EstimateSet& set);

/// 10 log10(1 / mse), peak 1.
double psnr(double mse);

/// Deterministic test scene: ramp background, a saturated disk, a black
/// rectangle, sinusoidal stripes and a soft blob. Values in [0, 1].
Image synthetic_image(int width, int height);

Image clamp01(const Image& img);

/// Round-to-nearest 8-bit quantization, returned back on the [0, 1] scale.
Image quantize8(const Image& img);

void check_same_shape(const Image& a, const Image& b, const char* what);

// Binary PGM (P5, maxval 255). Values map linearly [0,255] <-> [0,1].
Image read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Image& img);

}  // namespace dencomb
