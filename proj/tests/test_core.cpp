#include <doctest.h>

#include <filesystem>

#include "dencomb/error.hpp"
#include "dencomb/image.hpp"
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

}  // namespace

TEST_CASE("rng streams are reproducible") {
  Rng a(7), b(7), c(8);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.bits();
    CHECK(x == b.bits());
    (void)c.bits();
  }
  CHECK(Rng(7).bits() != Rng(8).bits());
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}

TEST_CASE("rng gaussian moments") {
  Rng rng(123);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    s += g;
    s2 += g * g;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("add_noise") {
  SUBCASE("vanishing noise leaves the image unchanged") {
    const Image clean = random_image(16, 16, 1);
    const Image noisy = add_noise(clean, {1e-6, false, 3});
    CHECK((noisy - clean).abs().maxCoeff() <= 1e-6);
  }
  SUBCASE("clipped model floors at zero") {
    const Image noisy = add_noise(Image::Zero(32, 32), {50, true, 9});
    CHECK(noisy.minCoeff() >= 0.0);
    CHECK(noisy.maxCoeff() <= 1.0);
  }
  SUBCASE("seeded reruns match and the variance follows sigma") {
    const Image zero = Image::Zero(8, 8);
    const NoiseModel m{20, false, 42};
    const Image a = add_noise(zero, m), b = add_noise(zero, m);
    CHECK((a == b).all());
    const double mean = a.mean();
    const double var = (a - mean).square().sum() / (a.size() - 1);
    const double expected = (20.0 / 255) * (20.0 / 255);
    CHECK(std::abs(var / expected - 1.0) <= 0.3);
  }
  SUBCASE("non-positive sigma is rejected") {
    CHECK_THROWS_AS(add_noise(Image::Zero(4, 4), {0, false, 0}), InvalidParameter);
    CHECK_THROWS_AS(add_noise(Image::Zero(4, 4), {-1, false, 0}), InvalidParameter);
  }
}

TEST_CASE("estimate set validation") {
  const Image a = Image::Zero(4, 4);
  CHECK_THROWS_AS(EstimateSet({}, {}, a), InvalidParameter);
  CHECK_THROWS_AS(EstimateSet({a, Image::Zero(4, 5)}, {"a", "b"}, a), ShapeError);
  CHECK_THROWS_AS(EstimateSet({a, a}, {"a", "a"}, a), InvalidParameter);
  CHECK_THROWS(EstimateSet({a, a}, {"a"}, a));
}

TEST_CASE("combine_estimates") {
  const Image x = random_image(6, 5, 2), y = random_image(6, 5, 3);
  const EstimateSet set({x, y}, {"x", "y"}, x);
  SUBCASE("basis vector selects an estimate") {
    CHECK((combine_estimates(set, Eigen::Vector2d(1, 0)) == x).all());
  }
  SUBCASE("identical estimates are fixed under any split") {
    const EstimateSet same({x, x}, {"a", "b"}, x);
    CHECK((combine_estimates(same, Eigen::Vector2d(0.3, 0.7)) - x).abs().maxCoeff() <= 1e-15);
  }
  SUBCASE("linearity on constants") {
    const EstimateSet c({Image::Constant(3, 3, 0.2), Image::Constant(3, 3, 0.6)}, {"a", "b"}, Image::Zero(3, 3));
    CHECK((combine_estimates(c, Eigen::Vector2d(0.5, 0.5)) - 0.4).abs().maxCoeff() <= 1e-15);
  }
  SUBCASE("weight length mismatch") {
    CHECK_THROWS_AS(combine_estimates(set, Eigen::Vector3d(1, 0, 0)), ShapeError);
  }
}

TEST_CASE("mse_between") {
  const Image a = random_image(13, 17, 4), b = random_image(13, 17, 5);
  CHECK(mse_between(a, a) == 0.0);
  CHECK(mse_between(Image::Zero(5, 5), Image::Constant(5, 5, 0.5)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(mse_between(a, b) - oracle::mse_loop(a, b)) <= 1e-12);
  CHECK_THROWS_AS(mse_between(a, Image::Zero(13, 16)), ShapeError);
}

TEST_CASE("pairwise distances are per-pixel and symmetric") {
  const Image a = random_image(8, 8, 6), b = random_image(8, 8, 7), c = random_image(8, 8, 8);
  const Eigen::MatrixXd d = pairwise_sq_dist(EstimateSet({a, b, c}, {"a", "b", "c"}, a));
  CHECK(d.diagonal().isZero(0));
  CHECK(d == d.transpose());
  CHECK(std::abs(d(0, 2) - oracle::mse_loop(a, c)) <= 1e-12);
}

TEST_CASE("psnr") {
  CHECK(psnr(0.01) == doctest::Approx(20.0));
  CHECK(psnr(1.0) == doctest::Approx(0.0));
}

TEST_CASE("synthetic image stays in range and contains saturated regions") {
  const Image img = synthetic_image(128, 96);
  CHECK(img.rows() == 96);
  CHECK(img.cols() == 128);
  CHECK(img.minCoeff() == 0.0);
  CHECK(img.maxCoeff() == 1.0);
}

TEST_CASE("pgm round trip") {
  const auto path = std::filesystem::temp_directory_path() / "dencomb_test_roundtrip.pgm";
  const Image img = quantize8(random_image(7, 11, 9));
  write_pgm(path, img);
  const Image back = read_pgm(path);
  CHECK(back.rows() == 7);
  CHECK(back.cols() == 11);
  CHECK((back - img).abs().maxCoeff() <= 1e-12);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_pgm(path), Error);
}
