#pragma once

// Sensitivity of the simplex-optimal combination to errors in Sigma.
//
// With w~ optimal for an estimate Sigma~ and w optimal for the true Sigma,
//   E||z~ - zhat||^2 <= E||zhat - z||^2 (2 Delta + Delta^2),
//   Delta = || Sigma Sigma~^-1 - Sigma^-1 Sigma~ ||_2.

#include <span>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "dencomb/covariance.hpp"
#include "dencomb/image.hpp"
#include "dencomb/jacobi.hpp"

namespace dencomb {

struct PerturbationReport {
  double delta = 0;            // ||S S~^-1 - S^-1 S~||_2 (used for the bound)
  double delta_transposed = 0; // ||S~ S^-1 - S~^-1 S||_2, the same value up to rounding
  double lhs = 0;              // mean ||z~ - zhat||^2 / N
  double rhs = 0;              // mean ||zhat - z||^2 / N * (2 Delta + Delta^2)
  bool bound_holds = false;    // lhs <= rhs + 1e-9
  Eigen::VectorXd weights_true;
  Eigen::VectorXd weights_est;
};

template <typename Derived>
MatrixX<typename Derived::Scalar> spd_inverse(const Eigen::MatrixBase<Derived>& a, const char* what) {
  using Scalar = typename Derived::Scalar;
  const Eigen::LLT<MatrixX<Scalar>> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError(std::string(what) + ": matrix is not positive definite\n" + dump_matrix(a));
  return llt.solve(MatrixX<Scalar>::Identity(a.rows(), a.cols()));
}

/// ||S S~^-1 - S^-1 S~||_2 for strictly positive definite S, S~.
template <typename Scalar>
Scalar perturbation_delta(const MatrixX<Scalar>& sigma, const MatrixX<Scalar>& sigma_est) {
  const MatrixX<Scalar> m = sigma * spd_inverse(sigma_est, "perturbation_delta") -
                            spd_inverse(sigma, "perturbation_delta") * sigma_est;
  return spectral_norm(m);
}

/// ||S~ S^-1 - S~^-1 S||_2, the ordering written in the statement of the bound.
template <typename Scalar>
Scalar perturbation_delta_transposed(const MatrixX<Scalar>& sigma, const MatrixX<Scalar>& sigma_est) {
  const MatrixX<Scalar> m = sigma_est * spd_inverse(sigma, "perturbation_delta") -
                            spd_inverse(sigma_est, "perturbation_delta") * sigma;
  return spectral_norm(m);
}

/// Largest difference between the sorted spectra of AB and BA. Both products
/// must have real spectra (e.g. A, B symmetric positive definite).
template <typename Scalar>
Scalar product_spectrum_mismatch(const MatrixX<Scalar>& a, const MatrixX<Scalar>& b) {
  auto sorted_real = [](const MatrixX<Scalar>& m) {
    Eigen::EigenSolver<MatrixX<Scalar>> es(m, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed\n" + dump_matrix(m));
    VectorX<Scalar> re = es.eigenvalues().real();
    const Scalar im = es.eigenvalues().imag().cwiseAbs().maxCoeff();
    std::sort(re.data(), re.data() + re.size());
    return std::pair{re, im};
  };
  const auto [ab, im_ab] = sorted_real(a * b);
  const auto [ba, im_ba] = sorted_real(b * a);
  return std::max({(ab - ba).cwiseAbs().maxCoeff(), im_ab, im_ba});
}

/// Solve the simplex problem under both matrices, combine the estimates with
/// each weight vector and evaluate both sides of the bound. `realizations`
/// are independent noise draws sharing `clean`; `sigma_true` should be
/// their averaged normalized second-moment matrix.
PerturbationReport perturbation_check(const CovMatrix& sigma_true, const CovMatrix& sigma_est,
                                      std::span<const EstimateSet> realizations, const Image& clean);

PerturbationReport perturbation_check(const CovMatrix& sigma_true, const CovMatrix& sigma_est,
                                      const EstimateSet& set, const Image& clean);

}  // namespace dencomb
