#pragma once

// Synthetic estimate sets with known second-moment matrices.

#include <string>
#include <vector>

#include "dencomb/covariance.hpp"
#include "dencomb/image.hpp"
#include "dencomb/rng.hpp"

namespace dencomb::fixture {

/// K estimates of a random clean image whose errors share a random mixing
/// matrix, so their error covariance has arbitrary correlations.
struct Synthetic {
  Image clean;
  EstimateSet set;
  CovMatrix sigma;  // exact normalized second moments of the errors
};

inline Synthetic correlated_estimates(int k, int side, Rng& rng) {
  Image clean(side, side);
  for (Eigen::Index i = 0; i < clean.size(); ++i) clean.data()[i] = rng.uniform();
  Eigen::MatrixXd mix(k, k);
  for (Eigen::Index i = 0; i < mix.size(); ++i) mix.data()[i] = 0.05 * rng.gaussian();
  mix.diagonal().array() += 0.1;  // keeps the error covariance away from singular
  std::vector<Image> est(k, clean);
  std::vector<std::string> labels;
  Eigen::VectorXd g(k);
  for (Eigen::Index p = 0; p < clean.size(); ++p) {
    for (int j = 0; j < k; ++j) g[j] = rng.gaussian();
    const Eigen::VectorXd e = mix * g;
    for (int j = 0; j < k; ++j) est[j].data()[p] += e[j];
  }
  for (int j = 0; j < k; ++j) labels.push_back("d" + std::to_string(j));
  EstimateSet set(est, labels, clean);
  Eigen::VectorXd mse(k);
  for (int j = 0; j < k; ++j) mse[j] = mse_between(est[j], clean);
  CovMatrix sigma = build_covariance(mse, pairwise_sq_dist(set), Provenance::oracle);
  return {clean, set, sigma};
}

/// Symmetric relative perturbation S~_ij = S_ij (1 + rel * u_ij), u uniform in [-1, 1].
inline CovMatrix perturb(const CovMatrix& s, double rel, Rng& rng) {
  Eigen::MatrixXd out = s.entries;
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = i; j < out.cols(); ++j) {
      out(i, j) *= 1 + rel * rng.uniform(-1, 1);
      out(j, i) = out(i, j);
    }
  return {out, Provenance::estimated};
}

}  // namespace dencomb::fixture
