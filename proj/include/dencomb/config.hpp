#pragma once

// Run configuration: plain-text `key = value` lines, `#` starts a comment,
// list values are comma separated.
//
//   clean        = synthetic:128 | synthetic:WxH | path/to/clean.pgm
//   noisy        = path/to/noisy.pgm          (optional; generated from clean otherwise)
//   sigma        = 25                         (noise level on the [0,255] scale)
//   clipped      = false
//   denoisers    = gaussian_blur:1.0, median:3, dct_threshold:2.7[:sigma_hat]
//   labels       = blur, median, dct           (optional; defaults from the specs)
//   mse_mode     = oracle | sure | external
//   mse_file     = path                        (external mode)
//   solver       = frank_wolfe | projected_gradient | closed_form_relaxed | closed_form_2way
//   max_iter     = 500
//   pg_step      = 0                           (0 = automatic)
//   booster      = twicing | osher | charest_milanfar | talebi_milanfar | sos
//   booster_iterations = 3
//   booster_inner = gaussian_blur:1.0
//   sigmas       = 10, 20, 30, 40, 50          (sweep, sure-study)
//   trials       = 50                          (sure-study)
//   sure_probes  = 1
//   sure_epsilon = 0.001
//   bench_k      = 3
//   bench_trials = 100
//   patch        = 64
//   seed         = 0

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dencomb/denoise.hpp"
#include "dencomb/image.hpp"
#include "dencomb/simplex.hpp"

namespace dencomb {

enum class MseMode { oracle, sure, external };

const char* to_string(MseMode m);

struct RunConfig {
  std::string clean;
  std::string noisy;
  double sigma255 = 25.0;
  bool clipped = false;
  std::vector<std::string> denoisers{"gaussian_blur:1.0", "median:3", "dct_threshold:2.7"};
  std::vector<std::string> labels;
  MseMode mse_mode = MseMode::oracle;
  std::filesystem::path mse_file;
  SolverId solver = SolverId::frank_wolfe;
  int max_iter = 500;
  double pg_step = 0.0;
  std::optional<BoostRule> booster;
  int booster_iterations = 3;
  std::string booster_inner = "gaussian_blur:1.0";
  std::vector<double> sigmas{10, 20, 30, 40, 50};
  int trials = 50;
  int sure_probes = 1;
  double sure_epsilon = 1e-3;
  int bench_k = 3;
  int bench_trials = 100;
  int patch = 64;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";

  /// Applies one key/value pair; throws ParseError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  NoiseModel noise_model(std::uint64_t noise_seed) const { return {sigma255, clipped, noise_seed}; }

  std::vector<DenoiserSpec> denoiser_specs() const;
  std::vector<std::string> denoiser_labels() const;
  BoosterSpec booster_spec() const;

  /// Cross-field checks (at least one denoiser, oracle mode needs a clean image, ...).
  void validate() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Loads `clean`: a PGM path or "synthetic:N" / "synthetic:WxH".
Image load_image_source(const std::string& source);

}  // namespace dencomb
