#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dencomb/denoise.hpp"
#include "dencomb/error.hpp"
#include "dencomb/mse.hpp"
#include "dencomb/rng.hpp"
#include "oracles.hpp"

using namespace dencomb;

namespace {

Image random_image(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Image img(rows, cols);
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = rng.uniform();
  return img;
}

// Divergence implied by a SURE value: invert the estimator formula.
double implied_divergence(double sure, const Image& noisy, const Image& denoised, double sigma) {
  const double n = static_cast<double>(noisy.size());
  return (sure - (noisy - denoised).square().sum() / n + sigma * sigma) * n / (2 * sigma * sigma);
}

}  // namespace

TEST_CASE("oracle_mse") {
  const Image clean = random_image(10, 12, 1);
  const EstimateSet set({clean, clean + 0.1}, {"same", "offset"}, clean);
  const auto r = oracle_mse(set, clean);
  CHECK(r.per_denoiser[0] == 0.0);
  CHECK(std::abs(r.per_denoiser[1] - 0.01) <= 1e-15);
  CHECK(r.method == MseMethod::oracle);
}

TEST_CASE("patch aggregation") {
  SUBCASE("two equal patches average") {
    const Image z = Image::Zero(64, 128);
    const EstimateSet set({z}, {"a"}, z);
    Eigen::MatrixXd per(1, 2);
    per << 1, 3;
    CHECK(patch_aggregate(set, per, 64).per_denoiser[0] == doctest::Approx(2.0));
    CHECK_THROWS_AS(patch_aggregate(set, Eigen::MatrixXd(Eigen::MatrixXd::Ones(1, 3)), 64), ShapeError);
  }
  SUBCASE("single patch equals the whole-image value") {
    const Image clean = random_image(32, 32, 2), e = random_image(32, 32, 3);
    const EstimateSet set({e}, {"e"}, clean);
    CHECK(std::abs(patch_aggregate(set, clean, 32).per_denoiser[0] - oracle_mse(set, clean).per_denoiser[0]) <=
          1e-15);
  }
  SUBCASE("weighted aggregate is exact, with and without partial tiles") {
    for (int side : {128, 100}) {
      const Image clean = random_image(side, side + 7, 4);
      const EstimateSet set({random_image(side, side + 7, 5), random_image(side, side + 7, 6)}, {"a", "b"}, clean);
      const auto agg = patch_aggregate(set, clean, 64);
      if (side == 128) CHECK(agg.per_patch->cols() == 6);
      CHECK((agg.per_denoiser - oracle_mse(set, clean).per_denoiser).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(agg.patch_pixels.sum() == doctest::Approx(double(clean.size())));
    }
    const Image c = Image::Zero(128, 128);
    CHECK(patch_grid(128, 128, 64).size() == 4);
  }
  SUBCASE("patch larger than the image") {
    CHECK_THROWS_AS(patch_grid(32, 32, 64), InvalidParameter);
  }
}

TEST_CASE("mc_sure") {
  const double sigma = 25.0 / 255;
  Rng rng(7);
  const Image clean = random_image(32, 32, 8);
  const Image noisy = add_noise(clean, {25, false, 9});

  SUBCASE("identity denoiser returns sigma squared") {
    const double s = mc_sure([](const Image& y) { return y; }, noisy, sigma, 1e-3, 1);
    CHECK(std::abs(s - sigma * sigma) <= 1e-12 * sigma * sigma);
  }
  SUBCASE("zero map") {
    const double s = mc_sure([](const Image& y) { return Image(Image::Zero(y.rows(), y.cols())); }, noisy, sigma,
                             1e-3, 1);
    CHECK(std::abs(s - (noisy.square().sum() / noisy.size() - sigma * sigma)) <= 1e-14);
    CHECK(std::abs(s - clean.square().sum() / clean.size()) <= 0.02);
  }
  SUBCASE("blur divergence approaches the exact trace") {
    const Image y = add_noise(random_image(16, 16, 10), {25, false, 11});
    auto blur = [](const Image& x) { return gaussian_blur(x, 1.0); };
    double trace = 0;
    for (Eigen::Index p = 0; p < y.size(); ++p) {
      Image e = Image::Zero(16, 16);
      e.data()[p] = 1;
      trace += blur(e).data()[p];
    }
    const double s = mc_sure(blur, y, sigma, 1e-3, 12, 50);
    const double div = implied_divergence(s, y, blur(y), sigma);
    CHECK(std::abs(div / trace - 1) <= 0.05);
  }
  SUBCASE("unbiased for a linear blur") {
    auto blur = [](const Image& x) { return gaussian_blur(x, 1.0); };
    double sure = 0, mse = 0;
    for (int t = 0; t < 30; ++t) {
      const Image y = add_noise(clean, {25, false, derive_seed(13, t)});
      sure += mc_sure(blur, y, sigma, 1e-3, derive_seed(14, t));
      mse += mse_between(blur(y), clean);
    }
    CHECK(std::abs(sure / mse - 1) <= 0.1);
  }
  SUBCASE("parameter errors") {
    auto id = [](const Image& y) { return y; };
    CHECK_THROWS_AS(mc_sure(id, noisy, sigma, 0, 1), InvalidParameter);
    CHECK_THROWS_AS(mc_sure(id, noisy, 0, 1e-3, 1), InvalidParameter);
    CHECK_THROWS_AS(mc_sure(id, noisy, sigma, 1e-3, 1, 0), InvalidParameter);
  }
  (void)rng;
}

TEST_CASE("clipped noise biases SURE more at high sigma") {
  const Image clean = synthetic_image(64, 64);
  auto blur = [](const Image& x) { return gaussian_blur(x, 1.0); };
  auto bias = [&](double s255) {
    double sure = 0, mse = 0;
    for (int t = 0; t < 10; ++t) {
      const Image y = add_noise(clean, {s255, true, derive_seed(20, t)});
      sure += mc_sure(blur, y, s255 / 255, 1e-3, derive_seed(21, t));
      mse += mse_between(blur(y), clean);
    }
    return std::abs(sure - mse) / 10;
  };
  CHECK(bias(50) > bias(10));
}

TEST_CASE("external MSE file") {
  const auto path = std::filesystem::temp_directory_path() / "dencomb_test_mse.txt";
  auto write = [&](const std::string& text) { std::ofstream(path) << text; };
  write("0.01\n0.02\n\n0.005\n");
  const auto r = load_external_mse(path, 3);
  CHECK(r.per_denoiser == Eigen::Vector3d(0.01, 0.02, 0.005));
  CHECK(r.method == MseMethod::external);
  CHECK_THROWS_AS(load_external_mse(path, 2), ShapeError);
  write("0.01\n-0.02\n");
  CHECK_THROWS_AS(load_external_mse(path, 2), ParseError);
  write("0.01\nabc\n");
  CHECK_THROWS_AS(load_external_mse(path, 2), ParseError);
  write("0.01 0.02\n");
  CHECK_THROWS_AS(load_external_mse(path, 2), ParseError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_external_mse(path, 2), ParseError);
}
