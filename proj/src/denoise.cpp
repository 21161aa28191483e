#include "dencomb/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dencomb/error.hpp"

namespace dencomb {

const char* to_string(DenoiserKind k) {
  switch (k) {
    case DenoiserKind::gaussian_blur: return "gaussian_blur";
    case DenoiserKind::median: return "median";
    case DenoiserKind::dct_threshold: return "dct_threshold";
    case DenoiserKind::external_file: return "external_file";
  }
  return "?";
}

namespace {

double parse_number(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "' in '" + context + "'");
  }
}

void validate(const DenoiserSpec& spec) {
  if (spec.kind == DenoiserKind::external_file) {
    if (spec.path.empty()) throw InvalidParameter("external_file denoiser needs a path");
    return;
  }
  if (!(spec.strength >= 0.0) || !std::isfinite(spec.strength)) {
    throw InvalidParameter(std::string(to_string(spec.kind)) + ": strength must be finite and non-negative");
  }
  if (spec.kind != DenoiserKind::dct_threshold && !(spec.strength > 0.0)) {
    throw InvalidParameter(std::string(to_string(spec.kind)) + ": strength must be positive");
  }
  if (spec.kind == DenoiserKind::median) {
    const double w = spec.strength;
    if (w != std::floor(w) || static_cast<long>(w) % 2 == 0) {
      throw InvalidParameter("median: window must be an odd integer, got " + std::to_string(w));
    }
  }
  if (spec.kind == DenoiserKind::dct_threshold && !(spec.sigma_hat255 > 0.0)) {
    throw InvalidParameter("dct_threshold: sigma_hat must be positive");
  }
}

// Edge-replicated index.
inline Eigen::Index clampi(Eigen::Index i, Eigen::Index n) { return std::clamp<Eigen::Index>(i, 0, n - 1); }

}  // namespace

DenoiserSpec DenoiserSpec::parse(const std::string& text, double default_sigma_hat255) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("denoiser '" + text + "': expected kind:strength");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  DenoiserSpec spec;
  spec.sigma_hat255 = default_sigma_hat255;
  if (kind == "external_file") {
    spec.kind = DenoiserKind::external_file;
    spec.path = rest;
  } else {
    if (kind == "gaussian_blur") spec.kind = DenoiserKind::gaussian_blur;
    else if (kind == "median") spec.kind = DenoiserKind::median;
    else if (kind == "dct_threshold") spec.kind = DenoiserKind::dct_threshold;
    else throw ParseError("unknown denoiser kind '" + kind + "'");
    const auto colon2 = rest.find(':');
    spec.strength = parse_number(rest.substr(0, colon2), text);
    if (colon2 != std::string::npos) spec.sigma_hat255 = parse_number(rest.substr(colon2 + 1), text);
  }
  validate(spec);
  return spec;
}

std::string DenoiserSpec::describe() const {
  if (kind == DenoiserKind::external_file) return "external_file:" + path.string();
  char buf[96];
  if (kind == DenoiserKind::dct_threshold) {
    std::snprintf(buf, sizeof buf, "%s:%g:%g", to_string(kind), strength, sigma_hat255);
  } else {
    std::snprintf(buf, sizeof buf, "%s:%g", to_string(kind), strength);
  }
  return buf;
}

Image gaussian_blur(const Image& img, double sigma_px) {
  if (!(sigma_px > 0.0)) throw InvalidParameter("gaussian_blur: sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma_px));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma_px * sigma_px));
    total += kernel[static_cast<std::size_t>(i + radius)];
  }
  for (auto& v : kernel) v /= total;

  const Eigen::Index rows = img.rows(), cols = img.cols();
  Image tmp(rows, cols), out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0;
      for (int i = -radius; i <= radius; ++i) acc += kernel[static_cast<std::size_t>(i + radius)] * img(r, clampi(c + i, cols));
      tmp(r, c) = acc;
    }
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0;
      for (int i = -radius; i <= radius; ++i) acc += kernel[static_cast<std::size_t>(i + radius)] * tmp(clampi(r + i, rows), c);
      out(r, c) = acc;
    }
  }
  return out;
}

Image median_filter(const Image& img, int window) {
  if (window < 1 || window % 2 == 0) throw InvalidParameter("median: window must be odd and positive");
  if (window == 1) return img;
  const int h = window / 2;
  const Eigen::Index rows = img.rows(), cols = img.cols();
  Image out(rows, cols);
  std::vector<double> buf(static_cast<std::size_t>(window) * window);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      std::size_t n = 0;
      for (int dr = -h; dr <= h; ++dr)
        for (int dc = -h; dc <= h; ++dc) buf[n++] = img(clampi(r + dr, rows), clampi(c + dc, cols));
      const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(n / 2);
      std::nth_element(buf.begin(), mid, buf.end());
      out(r, c) = *mid;
    }
  }
  return out;
}

Eigen::Matrix<double, 8, 8> dct8_basis() {
  Eigen::Matrix<double, 8, 8> c;
  for (int k = 0; k < 8; ++k) {
    const double a = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
    for (int n = 0; n < 8; ++n) c(k, n) = a * std::cos(std::numbers::pi * (n + 0.5) * k / 8.0);
  }
  return c;
}

Image dct_threshold(const Image& img, double threshold) {
  constexpr int B = 8, stride = 4;
  const Eigen::Index rows = img.rows(), cols = img.cols();
  if (rows < B || cols < B) throw ShapeError("dct_threshold: image must be at least 8x8");
  if (!(threshold >= 0.0)) throw InvalidParameter("dct_threshold: threshold must be non-negative");

  auto starts = [&](Eigen::Index n) {
    std::vector<Eigen::Index> s;
    for (Eigen::Index p = 0; p + B <= n; p += stride) s.push_back(p);
    if (s.back() + B < n) s.push_back(n - B);
    return s;
  };
  const auto rs = starts(rows), cs = starts(cols);
  const Eigen::Matrix<double, 8, 8> basis = dct8_basis();

  Image acc = Image::Zero(rows, cols), count = Image::Zero(rows, cols);
  Eigen::Matrix<double, 8, 8> block;
  for (const auto r : rs) {
    for (const auto c : cs) {
      block = img.block<B, B>(r, c).matrix();
      Eigen::Matrix<double, 8, 8> coef = basis * block * basis.transpose();
      for (int i = 0; i < B * B; ++i)
        if (std::abs(coef.data()[i]) < threshold) coef.data()[i] = 0.0;
      acc.block<B, B>(r, c) += (basis.transpose() * coef * basis).array();
      count.block<B, B>(r, c) += 1.0;
    }
  }
  return clamp01(acc / count);
}

Image denoise(const DenoiserSpec& spec, const Image& noisy) {
  validate(spec);
  switch (spec.kind) {
    case DenoiserKind::gaussian_blur: return gaussian_blur(noisy, spec.strength);
    case DenoiserKind::median: return median_filter(noisy, static_cast<int>(spec.strength));
    case DenoiserKind::dct_threshold: return dct_threshold(noisy, spec.strength * spec.sigma_hat255 / 255.0);
    case DenoiserKind::external_file: {
      Image out = read_pgm(spec.path);
      check_same_shape(out, noisy, ("external estimate " + spec.path.string()).c_str());
      return out;
    }
  }
  throw InvalidParameter("unknown denoiser kind");
}

DenoiserFn as_function(const DenoiserSpec& spec) {
  validate(spec);
  return [spec](const Image& y) { return denoise(spec, y); };
}

}  // namespace dencomb
