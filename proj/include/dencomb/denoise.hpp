#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dencomb/image.hpp"
#include "dencomb/mse.hpp"

namespace dencomb {

enum class DenoiserKind { gaussian_blur, median, dct_threshold, external_file };

/// strength: blur standard deviation in pixels, median window side (odd),
/// or DCT hard-threshold as a multiple of sigma_hat.
struct DenoiserSpec {
  DenoiserKind kind = DenoiserKind::gaussian_blur;
  double strength = 1.0;
  double sigma_hat255 = 25.0;
  std::filesystem::path path;  // external_file only

  /// Parses "kind:strength[:sigma_hat255]" or "external_file:path".
  static DenoiserSpec parse(const std::string& text, double default_sigma_hat255);
  std::string describe() const;
};

const char* to_string(DenoiserKind k);

Image denoise(const DenoiserSpec& spec, const Image& noisy);

/// Callable view of a spec; external_file specs load the image on each call.
DenoiserFn as_function(const DenoiserSpec& spec);

Image gaussian_blur(const Image& img, double sigma_px);
Image median_filter(const Image& img, int window);
Image dct_threshold(const Image& img, double threshold);

/// Orthonormal 8-point DCT-II basis, rows are frequencies.
Eigen::Matrix<double, 8, 8> dct8_basis();

enum class BoostRule { twicing, osher, charest_milanfar, talebi_milanfar, sos };

const char* to_string(BoostRule r);
BoostRule boost_rule_from_string(const std::string& name);

struct BoosterSpec {
  BoostRule rule = BoostRule::twicing;
  int iterations = 1;
  DenoiserSpec inner;
};

/// All iterates zhat^(1..T) of the selected recursion, B = denoise(spec.inner, .):
///   twicing, talebi_milanfar   zhat+ = B(y - zhat) + zhat
///   osher                      zhat+ = B(y + sum_{i=1..t} (y - zhat^(i)))
///   charest_milanfar           zhat+ = y + (zhat - B(zhat))
///   sos                        zhat+ = B(y + zhat) - zhat
std::vector<Image> boost_iterates(const BoosterSpec& spec, const Image& noisy, const Image& initial);

/// Final iterate of boost_iterates.
Image boost(const BoosterSpec& spec, const Image& noisy, const Image& initial);

}  // namespace dencomb
