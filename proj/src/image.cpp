#include "dencomb/image.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "dencomb/error.hpp"
#include "dencomb/rng.hpp"

namespace dencomb {

EstimateSet::EstimateSet(std::vector<Image> est, std::vector<std::string> lab, Image noisy)
    : estimates(std::move(est)), labels(std::move(lab)), source_noisy(std::move(noisy)) {
  if (estimates.empty()) throw InvalidParameter("estimate set needs at least one estimate");
  if (labels.size() != estimates.size()) throw ShapeError("estimate set: label count differs from estimate count");
  for (const auto& e : estimates) check_same_shape(e, source_noisy, "estimate set");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw InvalidParameter("estimate set: labels must be unique");
}

void check_same_shape(const Image& a, const Image& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": shape mismatch " + std::to_string(a.cols()) + "x" +
                     std::to_string(a.rows()) + " vs " + std::to_string(b.cols()) + "x" +
                     std::to_string(b.rows()));
  }
}

Image add_noise(const Image& clean, const NoiseModel& model) {
  if (!(model.sigma255 > 0.0) || !std::isfinite(model.sigma255)) {
    throw InvalidParameter("noise sigma must be positive, got " + std::to_string(model.sigma255));
  }
  Rng rng(model.seed);
  const double sigma = model.sigma();
  Image noisy(clean.rows(), clean.cols());
  for (Eigen::Index i = 0; i < clean.size(); ++i) {
    noisy.data()[i] = clean.data()[i] + sigma * rng.gaussian();
  }
  if (model.clipped) noisy = noisy.max(0.0).min(1.0);
  return noisy;
}

Image combine_estimates(const EstimateSet& set, const Eigen::Ref<const Eigen::VectorXd>& w) {
  if (w.size() != set.size()) {
    throw ShapeError("combine: weight vector has " + std::to_string(w.size()) + " entries for " +
                     std::to_string(set.size()) + " estimates");
  }
  Image out = Image::Zero(set.rows(), set.cols());
  for (int k = 0; k < set.size(); ++k) out += w[k] * set.estimates[k];
  return out;
}

double mse_between(const Image& a, const Image& b) {
  check_same_shape(a, b, "mse");
  if (a.size() == 0) throw ShapeError("mse: empty image");
  return (a - b).square().sum() / static_cast<double>(a.size());
}

Eigen::MatrixXd pairwise_sq_dist(const EstimateSet& set) {
  const int k = set.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      d(i, j) = d(j, i) = mse_between(set.estimates[i], set.estimates[j]);
    }
  }
  return d;
}

double psnr(double mse) { return 10.0 * std::log10(1.0 / mse); }

Image synthetic_image(int width, int height) {
  if (width <= 0 || height <= 0) throw InvalidParameter("synthetic image needs positive dimensions");
  Image img(height, width);
  const double w = width, h = height;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double x = (c + 0.5) / w, y = (r + 0.5) / h;
      double v = 0.15 + 0.6 * (0.6 * x + 0.4 * y);
      if (x > 0.55 && y < 0.45) v = 0.5 + 0.4 * std::sin(2.0 * std::numbers::pi * 8.0 * x);
      const double dx = x - 0.3, dy = y - 0.3;
      if (dx * dx + dy * dy < 0.02) v = 1.0;
      const double bx = x - 0.75, by = y - 0.75;
      v += 0.25 * std::exp(-(bx * bx + by * by) / 0.01);
      if (x > 0.1 && x < 0.4 && y > 0.65 && y < 0.9) v = 0.0;
      img(r, c) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

Image clamp01(const Image& img) { return img.max(0.0).min(1.0); }

Image quantize8(const Image& img) {
  return (clamp01(img) * 255.0).round() / 255.0;
}

}  // namespace dencomb
