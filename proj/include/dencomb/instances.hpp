#pragma once

#include <cmath>

#include "dencomb/covariance.hpp"
#include "dencomb/rng.hpp"

namespace dencomb {

/// Random strictly positive definite K x K matrix: a Wishart draw A A^T / (2K)
/// with A ~ N(0,1)^{K x 2K}, rescaled by a log-uniform diagonal in [1/2, 2]
/// and lifted by 0.05 * mean(diag) * I.
template <typename Scalar = double>
CovMatrixX<Scalar> random_spd(int k, Rng& rng) {
  MatrixX<Scalar> a(k, 2 * k);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = static_cast<Scalar>(rng.gaussian());
  MatrixX<Scalar> s = a * a.transpose() / Scalar(2 * k);
  VectorX<Scalar> d(k);
  for (int i = 0; i < k; ++i) d[i] = static_cast<Scalar>(std::exp(rng.uniform(-std::log(2.0), std::log(2.0))));
  s = d.asDiagonal() * s * d.asDiagonal();
  s += Scalar(0.05) * s.diagonal().mean() * MatrixX<Scalar>::Identity(k, k);
  s = ((s + s.transpose()) / Scalar(2)).eval();
  return {s, Provenance::oracle};
}

}  // namespace dencomb
