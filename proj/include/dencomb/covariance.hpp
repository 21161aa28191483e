#pragma once

// The K x K error second-moment matrix Sigma_ij = E[(zhat_i - z)^T (zhat_j - z)] / N
// and the tools that build, repair and inspect it.

#include <cmath>
#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "dencomb/error.hpp"
#include "dencomb/jacobi.hpp"

namespace dencomb {

enum class Provenance { oracle, estimated, repaired };

const char* to_string(Provenance p);

template <typename Scalar>
struct CovMatrixX {
  MatrixX<Scalar> entries;
  Provenance provenance = Provenance::estimated;

  Eigen::Index k() const { return entries.rows(); }
};

using CovMatrix = CovMatrixX<double>;

/// Relative asymmetry max|A - A^T| / max(1, max|A|) ; 0 for exactly symmetric input.
template <typename Derived>
typename Derived::Scalar asymmetry(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() == 0) return Scalar(0);
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols()) throw ShapeError(std::string(what) + ": matrix is not square");
  if (!a.allFinite()) throw NumericalError(std::string(what) + ": non-finite entries\n" + dump_matrix(a));
  if (asymmetry(a) > 1e-12) throw InvalidParameter(std::string(what) + ": matrix is not symmetric\n" + dump_matrix(a));
}

/// Sigma_ii = mse_i, Sigma_ij = (mse_i + mse_j - dist_ij) / 2.
/// `dist` holds per-pixel mean squared distances between estimates.
template <typename DerivedV, typename DerivedM>
CovMatrixX<typename DerivedV::Scalar> build_covariance(const Eigen::MatrixBase<DerivedV>& mse,
                                                       const Eigen::MatrixBase<DerivedM>& dist,
                                                       Provenance provenance = Provenance::estimated) {
  using Scalar = typename DerivedV::Scalar;
  const Eigen::Index k = mse.size();
  if (k == 0) throw InvalidParameter("build_covariance: empty MSE vector");
  if (dist.rows() != k || dist.cols() != k) throw ShapeError("build_covariance: distance matrix must be K x K");
  if (!mse.allFinite() || !dist.allFinite()) throw NumericalError("build_covariance: non-finite input");
  if (provenance == Provenance::oracle && (mse.array() < 0).any()) {
    throw InvalidParameter("build_covariance: negative MSE entry");
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (dist(i, i) != Scalar(0)) throw InvalidParameter("build_covariance: distance diagonal must be zero");
    for (Eigen::Index j = i + 1; j < k; ++j)
      if (dist(i, j) != dist(j, i)) throw InvalidParameter("build_covariance: distance matrix is not symmetric");
  }
  CovMatrixX<Scalar> out{MatrixX<Scalar>(k, k), provenance};
  for (Eigen::Index i = 0; i < k; ++i) {
    out.entries(i, i) = mse[i];
    for (Eigen::Index j = i + 1; j < k; ++j) {
      out.entries(i, j) = out.entries(j, i) = (mse[i] + mse[j] - dist(i, j)) / Scalar(2);
    }
  }
  return out;
}

/// Frobenius-nearest positive semi-definite matrix: negative eigenvalues set to zero.
template <typename Scalar>
CovMatrixX<Scalar> psd_project(const CovMatrixX<Scalar>& sigma_tilde) {
  require_symmetric(sigma_tilde.entries, "psd_project");
  const auto eig = jacobi_eigen(sigma_tilde.entries);
  const VectorX<Scalar> clipped = eig.values.cwiseMax(Scalar(0));
  MatrixX<Scalar> rebuilt = eig.vectors * clipped.asDiagonal() * eig.vectors.transpose();
  rebuilt = ((rebuilt + rebuilt.transpose()) / Scalar(2)).eval();
  return {rebuilt, Provenance::repaired};
}

template <typename Scalar>
Scalar min_eigenvalue(const MatrixX<Scalar>& a) {
  return jacobi_eigen(a).values[0];
}

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix; eigenvalues at or
/// below 1e-12 * lambda_max are treated as zero.
template <typename Derived>
MatrixX<typename Derived::Scalar> pseudo_inverse_psd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const auto eig = jacobi_eigen(a);
  const Eigen::Index n = a.rows();
  const Scalar lmax = n > 0 ? eig.values.cwiseAbs().maxCoeff() : Scalar(0);
  VectorX<Scalar> inv = VectorX<Scalar>::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (eig.values[i] > Scalar(1e-12) * lmax) inv[i] = Scalar(1) / eig.values[i];
  return eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
}

/// Closed-form eigen-structure of a symmetric 2 x 2 matrix.
///
/// (s1, u1) and (s2, u2) are eigenpairs with s1 <= s2. The level set
/// w^T Sigma w = c is an ellipse whose short (minor) axis lies along the
/// eigenvector of the larger eigenvalue, so minor_axis() is u2. When
/// Sigma_12 > 0 the minor axis points northeast (same-sign components) and
/// the major axis northwest.
template <typename Scalar>
struct Eigen2x2X {
  Scalar s1, s2;
  Eigen::Matrix<Scalar, 2, 1> u1, u2;

  const Eigen::Matrix<Scalar, 2, 1>& minor_axis() const { return u2; }
  const Eigen::Matrix<Scalar, 2, 1>& major_axis() const { return u1; }
};

using Eigen2x2 = Eigen2x2X<double>;

template <typename Scalar>
Eigen2x2X<Scalar> eigen_2x2(const CovMatrixX<Scalar>& sigma) {
  using std::sqrt;
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  if (sigma.k() != 2) throw ShapeError("eigen_2x2: matrix must be 2 x 2");
  require_symmetric(sigma.entries, "eigen_2x2");
  const Scalar a = sigma.entries(0, 0), b = sigma.entries(0, 1), d = sigma.entries(1, 1);
  const Scalar lambda = sqrt(Scalar(4) * b * b + (a - d) * (a - d));
  Eigen2x2X<Scalar> out;
  out.s1 = (a + d - lambda) / Scalar(2);
  out.s2 = (a + d + lambda) / Scalar(2);

  auto eigvec = [&](Scalar s) -> Vec2 {
    // Two algebraically equivalent null vectors of (Sigma - s I); keep the longer one.
    const Vec2 p(s - d, b), q(b, s - a);
    Vec2 u = p.squaredNorm() >= q.squaredNorm() ? p : q;
    const Scalar n = u.norm();
    if (n == Scalar(0)) return Vec2(1, 0);
    u /= n;
    if (u[1] < 0 || (u[1] == Scalar(0) && u[0] < 0)) u = -u;
    return u;
  };

  if (b == Scalar(0)) {
    // Axis-aligned.
    out.u1 = a <= d ? Vec2(1, 0) : Vec2(0, 1);
    out.u2 = a <= d ? Vec2(0, 1) : Vec2(1, 0);
  } else {
    out.u1 = eigvec(out.s1);
    out.u2 = eigvec(out.s2);
  }
  return out;
}

// Plain-text matrix file: first line K, then K rows of K decimals (17 significant digits).
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

}  // namespace dencomb
