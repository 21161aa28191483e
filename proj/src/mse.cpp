#include "dencomb/mse.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dencomb/error.hpp"
#include "dencomb/rng.hpp"

namespace dencomb {

const char* to_string(MseMethod m) {
  switch (m) {
    case MseMethod::oracle: return "oracle";
    case MseMethod::mc_sure: return "mc_sure";
    case MseMethod::external: return "external";
  }
  return "?";
}

MseReport oracle_mse(const EstimateSet& set, const Image& clean) {
  check_same_shape(set.source_noisy, clean, "oracle_mse");
  MseReport rep;
  rep.method = MseMethod::oracle;
  rep.per_denoiser.resize(set.size());
  for (int k = 0; k < set.size(); ++k) rep.per_denoiser[k] = mse_between(set.estimates[k], clean);
  return rep;
}

std::vector<Eigen::Array4i> patch_grid(Eigen::Index rows, Eigen::Index cols, int patch) {
  if (patch <= 0) throw InvalidParameter("patch size must be positive");
  if (patch > rows || patch > cols) {
    throw InvalidParameter("patch size " + std::to_string(patch) + " exceeds image " + std::to_string(cols) + "x" +
                           std::to_string(rows));
  }
  std::vector<Eigen::Array4i> tiles;
  for (Eigen::Index r = 0; r < rows; r += patch) {
    for (Eigen::Index c = 0; c < cols; c += patch) {
      tiles.emplace_back(static_cast<int>(r), static_cast<int>(c), static_cast<int>(std::min<Eigen::Index>(patch, rows - r)),
                         static_cast<int>(std::min<Eigen::Index>(patch, cols - c)));
    }
  }
  return tiles;
}

namespace {

MseReport aggregate(const Eigen::MatrixXd& per_patch, const Eigen::VectorXd& pixels, MseMethod method, int patch) {
  MseReport rep;
  rep.method = method;
  rep.patch_size = patch;
  rep.per_patch = per_patch;
  rep.patch_pixels = pixels;
  rep.per_denoiser = per_patch * pixels / pixels.sum();
  return rep;
}

}  // namespace

MseReport patch_aggregate(const EstimateSet& set, const Image& clean, int patch) {
  check_same_shape(set.source_noisy, clean, "patch_aggregate");
  const auto tiles = patch_grid(clean.rows(), clean.cols(), patch);
  const auto m = static_cast<Eigen::Index>(tiles.size());
  Eigen::MatrixXd per_patch(set.size(), m);
  Eigen::VectorXd pixels(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& t = tiles[static_cast<std::size_t>(i)];
    pixels[i] = static_cast<double>(t[2]) * t[3];
    const auto ref = clean.block(t[0], t[1], t[2], t[3]);
    for (int k = 0; k < set.size(); ++k) {
      per_patch(k, i) = (set.estimates[k].block(t[0], t[1], t[2], t[3]) - ref).square().sum() / pixels[i];
    }
  }
  return aggregate(per_patch, pixels, MseMethod::oracle, patch);
}

MseReport patch_aggregate(const EstimateSet& set, const Eigen::MatrixXd& per_patch, int patch) {
  const auto tiles = patch_grid(set.rows(), set.cols(), patch);
  if (per_patch.rows() != set.size() || per_patch.cols() != static_cast<Eigen::Index>(tiles.size())) {
    throw ShapeError("patch_aggregate: expected " + std::to_string(set.size()) + " x " + std::to_string(tiles.size()) +
                     " patch values");
  }
  Eigen::VectorXd pixels(static_cast<Eigen::Index>(tiles.size()));
  for (std::size_t i = 0; i < tiles.size(); ++i) pixels[static_cast<Eigen::Index>(i)] = double(tiles[i][2]) * tiles[i][3];
  return aggregate(per_patch, pixels, MseMethod::external, patch);
}

double mc_sure(const DenoiserFn& denoiser, const Image& noisy, double sigma, double epsilon, std::uint64_t probe_seed,
               int probes) {
  if (!(epsilon > 0.0)) throw InvalidParameter("mc_sure: epsilon must be positive");
  if (!(sigma > 0.0)) throw InvalidParameter("mc_sure: sigma must be positive");
  if (probes < 1) throw InvalidParameter("mc_sure: need at least one probe");
  const Image base = denoiser(noisy);
  check_same_shape(base, noisy, "mc_sure denoiser output");
  const double n = static_cast<double>(noisy.size());

  Rng rng(probe_seed);
  double divergence = 0;
  for (int p = 0; p < probes; ++p) {
    Image b(noisy.rows(), noisy.cols());
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = rng.rademacher();
    const Image moved = denoiser(noisy + epsilon * b);
    check_same_shape(moved, noisy, "mc_sure denoiser output");
    divergence += (b * (moved - base)).sum() / epsilon;
  }
  divergence /= probes;
  const double s2 = sigma * sigma;
  return (noisy - base).square().sum() / n - s2 + 2.0 * s2 / n * divergence;
}

MseReport load_external_mse(const std::filesystem::path& path, int k) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::istringstream ls(line);
    double v;
    std::string extra;
    if (!(ls >> v) || (ls >> extra)) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected one decimal");
    if (!std::isfinite(v)) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": non-finite value");
    if (v < 0) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": negative MSE");
    values.push_back(v);
  }
  if (static_cast<int>(values.size()) != k) {
    throw ShapeError(path.string() + ": expected " + std::to_string(k) + " values, found " + std::to_string(values.size()));
  }
  MseReport rep;
  rep.method = MseMethod::external;
  rep.per_denoiser = Eigen::Map<const Eigen::VectorXd>(values.data(), k);
  return rep;
}

}  // namespace dencomb
