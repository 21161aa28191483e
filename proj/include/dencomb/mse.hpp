#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>

#include <Eigen/Core>

#include "dencomb/image.hpp"

namespace dencomb {

enum class MseMethod { oracle, mc_sure, external };

const char* to_string(MseMethod m);

struct MseReport {
  Eigen::VectorXd per_denoiser;              // K per-pixel MSEs (SURE values may be negative)
  std::optional<Eigen::MatrixXd> per_patch;  // K x M
  Eigen::VectorXd patch_pixels;              // M pixel counts when per_patch is set
  MseMethod method = MseMethod::oracle;
  int patch_size = 64;
};

using DenoiserFn = std::function<Image(const Image&)>;

/// ||zhat_k - z||^2 / N for each estimate.
MseReport oracle_mse(const EstimateSet& set, const Image& clean);

/// Tiles of patch x patch pixels in row-major order; trailing partial tiles
/// are kept. Returns (row, col, rows, cols) per tile.
std::vector<Eigen::Array4i> patch_grid(Eigen::Index rows, Eigen::Index cols, int patch);

/// Per-patch oracle MSEs, aggregated by pixel-count weighting.
MseReport patch_aggregate(const EstimateSet& set, const Image& clean, int patch = 64);

/// Aggregates externally supplied per-patch values (K x M), weighting each
/// patch by its pixel count on the image grid.
MseReport patch_aggregate(const EstimateSet& set, const Eigen::MatrixXd& per_patch, int patch = 64);

/// Monte-Carlo SURE with `probes` Rademacher probes (divergence averaged):
///   ||y - D(y)||^2/N - sigma^2 + 2 sigma^2/N * b^T (D(y + eps b) - D(y)) / eps
/// `sigma` is on the [0, 1] scale. Valid for unclipped Gaussian noise.
double mc_sure(const DenoiserFn& denoiser, const Image& noisy, double sigma, double epsilon,
               std::uint64_t probe_seed, int probes = 1);

/// K non-negative decimals, one per line.
MseReport load_external_mse(const std::filesystem::path& path, int k);

}  // namespace dencomb
